// Placeholder CLI; filled in once the experiment harness lands.
int main() { return 0; }
