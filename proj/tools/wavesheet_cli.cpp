// Command-line front end for the water-wave sheet simulator.
// Verbs are added as the corresponding library features come online.
#include <cstdio>

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::puts("wavesheet_cli: no verbs wired up yet");
    return 1;
}
