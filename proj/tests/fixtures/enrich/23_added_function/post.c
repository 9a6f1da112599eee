int one(void) {
  return 1;
}

int two(void) {
  int t = 2;
  return t;
}
