#include <cstdio>
int main() { std::puts("sway placeholder"); return 0; }
