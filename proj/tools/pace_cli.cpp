#include "pace/cli.hpp"

int main(int argc, char** argv) {
    return pace::run_cli(argc, argv);
}
