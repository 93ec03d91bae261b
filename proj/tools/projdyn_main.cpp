#include "projdyn/cli.hpp"

int main(int argc, char** argv) { return projdyn::cli_run(argc, argv); }
