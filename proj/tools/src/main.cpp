#include "nematic/app/commands.hpp"

int main(int argc, char** argv) { return nematic::app::run_cli(argc, argv); }
