#include "topoplan/cli_app.hpp"

int main(int argc, char** argv) { return topoplan::run_cli(argc, argv); }
