int f(int n, char *buf) {
  int len = n * 2;
  int pad = 4;
  if (len > 16) {
    len = 15;
  }
  memcpy(buf, src, len);
  return len + pad;
}
