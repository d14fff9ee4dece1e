#include "sebd/cli.hpp"

int main(int argc, char** argv) { return sebd::cli_main(argc, argv); }
