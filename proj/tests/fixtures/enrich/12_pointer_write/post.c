int parse(char *in, int *out) {
  int v = atoi(in);
  *out = v - 1;
  int w = *out + 1;
  return w;
}
