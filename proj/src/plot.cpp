#include "swarm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace swarm {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 60.0;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Bounds {
    double x0{std::numeric_limits<double>::infinity()};
    double x1{-std::numeric_limits<double>::infinity()};
    double y0{std::numeric_limits<double>::infinity()};
    double y1{-std::numeric_limits<double>::infinity()};

    void add(double x, double y) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }

    void finalize() {
        if (x0 > x1) { x0 = 0.0; x1 = 1.0; }
        if (y0 > y1) { y0 = 0.0; y1 = 1.0; }
        if (x1 - x0 < 1e-9) { x0 -= 0.5; x1 += 0.5; }
        if (y1 - y0 < 1e-9) { y0 -= 0.5; y1 += 0.5; }
    }
};

// Maps data coordinates into the plotting frame.
class Frame {
public:
    Frame(Bounds b, bool equal_aspect) : b_(b) {
        sx_ = (kWidth - 2 * kMargin) / (b_.x1 - b_.x0);
        sy_ = (kHeight - 2 * kMargin) / (b_.y1 - b_.y0);
        if (equal_aspect) sx_ = sy_ = std::min(sx_, sy_);
    }
    double x(double v) const { return kMargin + (v - b_.x0) * sx_; }
    double y(double v) const { return kHeight - kMargin - (v - b_.y0) * sy_; }
    double scale() const { return sx_; }
    const Bounds& bounds() const { return b_; }

private:
    Bounds b_;
    double sx_{1.0};
    double sy_{1.0};
};

void open_svg(std::ostringstream& out, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
        << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    const double left = kMargin, right = kWidth - kMargin, top = kMargin, bottom = kHeight - kMargin;
    out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\"" << bottom << "\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << left << "\" y2=\"" << top << "\"/>\n"
        << "</g>\n";
    const Bounds& b = f.bounds();
    for (int i = 0; i <= 4; ++i) {
        const double xv = b.x0 + (b.x1 - b.x0) * i / 4.0;
        const double yv = b.y0 + (b.y1 - b.y0) * i / 4.0;
        out << "<text x=\"" << fmt(f.x(xv)) << "\" y=\"" << bottom + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << label(xv) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << fmt(f.y(yv) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << label(yv) << "</text>\n";
    }
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << xlabel << "</text>\n"
        << "<text x=\"18\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << kHeight / 2 << ")\">" << ylabel << "</text>\n";
}

template <typename Points>
void polyline(std::ostringstream& out, const Points& pts, const Frame& f, const char* color,
              const std::string& cls) {
    out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.2\" points=\"";
    bool first = true;
    for (const auto& [x, y] : pts) {
        if (!first) out << ' ';
        out << fmt(f.x(x)) << ',' << fmt(f.y(y));
        first = false;
    }
    out << "\"/>\n";
}

std::vector<double> distinct_times(const TrajectoryLog& log) {
    std::vector<double> t;
    for (std::size_t k = 0; k < log.steps(); ++k) t.push_back(log.at(k, 0).t);
    return t;
}

std::string render_top(const TrajectoryLog& log, const PlotOptions& opt) {
    Bounds b;
    for (const auto& r : log.rows) b.add(r.p.x, r.p.y);
    for (const auto& o : opt.obstacles) {
        b.add(o.center.x - o.radius, o.center.y - o.radius);
        b.add(o.center.x + o.radius, o.center.y + o.radius);
    }
    for (const auto& bl : opt.buildings) {
        b.add(bl.lo.x, bl.lo.y);
        b.add(bl.hi.x, bl.hi.y);
    }
    b.finalize();
    const Frame f(b, true);

    std::ostringstream out;
    open_svg(out, "Top view");
    axes(out, f, "x [m]", "y [m]");
    for (const auto& bl : opt.buildings) {
        out << "<rect class=\"building\" x=\"" << fmt(f.x(bl.lo.x)) << "\" y=\"" << fmt(f.y(bl.hi.y))
            << "\" width=\"" << fmt((bl.hi.x - bl.lo.x) * f.scale()) << "\" height=\""
            << fmt((bl.hi.y - bl.lo.y) * f.scale()) << "\" fill=\"#bbbbbb\" stroke=\"#555555\"/>\n";
    }
    // Obstacles drawn at their first and last logged positions.
    std::vector<int> ids;
    for (const auto& o : opt.obstacles)
        if (std::find(ids.begin(), ids.end(), o.id) == ids.end()) ids.push_back(o.id);
    for (int id : ids) {
        const ObstacleRow* first = nullptr;
        const ObstacleRow* last = nullptr;
        for (const auto& o : opt.obstacles) {
            if (o.id != id) continue;
            if (!first) first = &o;
            last = &o;
        }
        for (const ObstacleRow* o : {first, last}) {
            out << "<circle class=\"obstacle\" cx=\"" << fmt(f.x(o->center.x)) << "\" cy=\"" << fmt(f.y(o->center.y))
                << "\" r=\"" << fmt(o->radius * f.scale()) << "\" fill=\"#f4cccc\" stroke=\"#990000\"/>\n";
            if (first->center == last->center) break;
        }
    }
    for (int a = 0; a < log.agents; ++a) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t k = 0; k < log.steps(); ++k) pts.emplace_back(log.at(k, a).p.x, log.at(k, a).p.y);
        polyline(out, pts, f, kPalette[a % 10], "path");
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_projection(const TrajectoryLog& log, const PlotOptions& opt) {
    const double c30 = std::cos(kPi / 6.0), s30 = std::sin(kPi / 6.0);
    auto project = [&](const Vec3& p) { return std::pair<double, double>{(p.x - p.y) * c30, (p.x + p.y) * s30 + p.z}; };

    Bounds b;
    for (const auto& r : log.rows) {
        const auto [u, v] = project(r.p);
        b.add(u, v);
    }
    for (const auto& o : opt.obstacles) {
        const auto [u, v] = project(o.center);
        b.add(u - o.radius, v - o.radius);
        b.add(u + o.radius, v + o.radius);
    }
    b.finalize();
    const Frame f(b, true);

    std::ostringstream out;
    open_svg(out, "Isometric projection");
    axes(out, f, "(x - y) cos 30 [m]", "(x + y) sin 30 + z [m]");
    for (const auto& bl : opt.buildings) {
        // Roof outline only.
        const Vec3 corners[4] = {{bl.lo.x, bl.lo.y, bl.hi.z}, {bl.hi.x, bl.lo.y, bl.hi.z},
                                 {bl.hi.x, bl.hi.y, bl.hi.z}, {bl.lo.x, bl.hi.y, bl.hi.z}};
        out << "<polygon class=\"building\" fill=\"#dddddd\" stroke=\"#555555\" points=\"";
        for (int i = 0; i < 4; ++i) {
            const auto [u, v] = project(corners[i]);
            out << (i ? " " : "") << fmt(f.x(u)) << ',' << fmt(f.y(v));
        }
        out << "\"/>\n";
    }
    std::vector<int> seen;
    for (const auto& o : opt.obstacles) {
        if (std::find(seen.begin(), seen.end(), o.id) != seen.end()) continue;
        seen.push_back(o.id);
        const auto [u, v] = project(o.center);
        out << "<circle class=\"obstacle\" cx=\"" << fmt(f.x(u)) << "\" cy=\"" << fmt(f.y(v)) << "\" r=\""
            << fmt(o.radius * f.scale()) << "\" fill=\"#f4cccc\" stroke=\"#990000\"/>\n";
    }
    for (int a = 0; a < log.agents; ++a) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t k = 0; k < log.steps(); ++k) pts.push_back(project(log.at(k, a).p));
        polyline(out, pts, f, kPalette[a % 10], "path");
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_separation(const TrajectoryLog& log, const PlotOptions& opt) {
    const std::vector<double> times = distinct_times(log);
    const int ref = opt.agent;
    const bool valid_ref = ref >= 0 && ref < log.agents;

    Bounds b;
    b.add(times.empty() ? 0.0 : times.front(), 0.0);
    b.add(times.empty() ? 1.0 : times.back(), opt.safety_range * 1.2);
    std::vector<std::vector<std::pair<double, double>>> curves;
    if (valid_ref) {
        for (int j = 0; j < log.agents; ++j) {
            if (j == ref) continue;
            std::vector<std::pair<double, double>> pts;
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double d = distance(log.at(k, ref).p, log.at(k, j).p);
                pts.emplace_back(times[k], d);
                b.add(times[k], d);
            }
            curves.push_back(std::move(pts));
        }
    }
    b.finalize();
    const Frame f(b, false);

    std::ostringstream out;
    open_svg(out, "Distance from agent " + std::to_string(ref));
    axes(out, f, "t [s]", "|d_ij| [m]");
    for (std::size_t c = 0; c < curves.size(); ++c) polyline(out, curves[c], f, kPalette[c % 10], "distance");
    out << "<line class=\"safety\" x1=\"" << fmt(f.x(b.x0)) << "\" y1=\"" << fmt(f.y(opt.safety_range))
        << "\" x2=\"" << fmt(f.x(b.x1)) << "\" y2=\"" << fmt(f.y(opt.safety_range))
        << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace

std::string render_svg(const TrajectoryLog& log, PlotView view, const PlotOptions& options) {
    switch (view) {
        case PlotView::Top: return render_top(log, options);
        case PlotView::Projection: return render_projection(log, options);
        case PlotView::Separation: return render_separation(log, options);
    }
    return {};
}

std::vector<ObstacleRow> obstacle_rows_for(const TrajectoryLog& log, const std::vector<Obstacle>& obstacles) {
    std::vector<ObstacleRow> rows;
    for (double t : distinct_times(log))
        for (const auto& o : obstacles) rows.push_back({t, o.id, obstacle_center_at(o, t), o.radius});
    return rows;
}

}  // namespace swarm
