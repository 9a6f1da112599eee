static int a(int x) {
  int y = x + 1;
  return y;
}

static int b(int x) {
  return x * 2;
}

static int c(int x) {
  int z = x;
  if (z > 3)
    z = 3;
  return z;
}
