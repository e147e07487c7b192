#include "swarm/cli.hpp"

int main(int argc, char** argv) { return swarm::cli::main(argc, argv); }
