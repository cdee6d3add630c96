#include "looprate/cli.hpp"

int main(int argc, char** argv) { return looprate::cli_main(argc, argv); }
