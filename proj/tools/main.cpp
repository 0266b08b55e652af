#include "corrmate/cli.hpp"

int main(int argc, char** argv) { return corrmate::run(argc, argv); }
