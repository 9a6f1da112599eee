int sum(int *v, int n) {
  int total = 0;
  int lim = n - 1;
  for (int i = 0; i < lim; i++) {
    total += v[i];
  }
  return total;
}
