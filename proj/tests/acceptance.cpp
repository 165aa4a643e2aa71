// Acceptance suite: one line per criterion, all must print PASS.
#include <iostream>

int main() {
    std::cout << "acceptance suite placeholder\n";
    return 1;
}
