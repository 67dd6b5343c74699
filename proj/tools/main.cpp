#include "cli.hpp"

int main(int argc, char** argv) { return swarmplan::cli::run(argc, argv); }
