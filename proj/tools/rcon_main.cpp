#include "rcon/cli.hpp"

int main(int argc, char** argv) { return rcon::cli_main(argc, argv); }
