int clamp(int v, int lo, int hi) {
  int r = v;
  if (r < lo)
    r = lo + 1;
  if (r > hi)
    r = hi - 1;
  return r;
}
