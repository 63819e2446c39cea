#include "heatfock/cli.hpp"

int main(int argc, char** argv) { return heatfock::run_cli(argc, argv); }
