#include <cstdio>

int main() {
    std::puts("omt: command line not wired up yet");
    return 2;
}
