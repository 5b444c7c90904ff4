#include "dmdt/cli.hpp"

int main(int argc, char** argv) { return dmdt::run_cli(argc, argv); }
