void copy(char *dst, const char *src, int n) {
  int i = 0;
  while (i < n - 1) {
    dst[i] = src[i];
    i++;
  }
  dst[i] = 0;
}
