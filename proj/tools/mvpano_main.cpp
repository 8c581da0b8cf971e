#include <cstdio>

int main() {
  std::puts("mvpano: not wired up yet");
  return 0;
}
