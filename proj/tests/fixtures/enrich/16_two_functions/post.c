static int a(int x) {
  int y = x + 2;
  return y;
}

static int b(int x) {
  return x * 2;
}

static int c(int x) {
  int z = x;
  if (z > 3)
    z = 2;
  return z;
}
