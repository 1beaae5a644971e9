#include "rvtail/cli.hpp"

int main(int argc, char** argv) { return rvtail::cli_main(argc, argv); }
