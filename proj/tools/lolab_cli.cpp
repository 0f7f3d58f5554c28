#include "lolab/cli.hpp"

int main(int argc, char** argv) { return lolab::cli_dispatch(argc, argv); }
