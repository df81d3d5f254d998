#include "lzsim/cli.hpp"

int main(int argc, char **argv) { return lzsim::cli_main(argc, argv); }
