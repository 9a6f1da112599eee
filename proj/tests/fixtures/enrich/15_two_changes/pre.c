int clamp(int v, int lo, int hi) {
  int r = v;
  if (r < lo)
    r = lo;
  if (r > hi)
    r = hi;
  return r;
}
