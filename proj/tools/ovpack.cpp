#include "ovpack/cli.hpp"

int main(int argc, char** argv) { return ovp::cli_main(argc, argv); }
