int scale(int x) {
  int a = x * 4;
  int b = a + 1;
  int c = b * b;
  int d = 7;
  return c + d;
}
