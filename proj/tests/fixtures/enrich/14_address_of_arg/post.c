int read_cfg(FILE *fp) {
  int n = 0;
  int size;
  fscanf(fp, "%d", &size);
  n = size * 2 + 1;
  return n;
}
