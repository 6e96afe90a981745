#include "cli.hpp"

int main(int argc, char** argv) { return cekm::run_cli(argc, argv); }
