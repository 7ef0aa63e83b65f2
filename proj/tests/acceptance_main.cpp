// Acceptance suite: one pass/fail line per criterion. Placeholder.
int main() { return 0; }
