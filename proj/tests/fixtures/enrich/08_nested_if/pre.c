int check(int a, int b) {
  int r = 0;
  if (a > 0) {
    if (b > 0) {
      r = a / b;
    }
  }
  return r;
}
