void zero(int *a, int n) {
  int m = n / 2;
  for (int i = 0; i < m; i++)
    a[i] = 0;
  a[m] = 1;
}
