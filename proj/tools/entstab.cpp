#include "entstab/cli.hpp"

int main(int argc, char** argv) { return entstab::run_cli(argc, argv); }
