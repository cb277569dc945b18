#include "runner/commands.hpp"

int main(int argc, char** argv) { return ceofdm::runner::run_cli(argc, argv); }
