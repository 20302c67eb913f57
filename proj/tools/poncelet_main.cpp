#include "poncelet/scenario.hpp"

int main(int argc, char** argv) {
    return poncelet::harness::run_cli(argc, argv);
}
