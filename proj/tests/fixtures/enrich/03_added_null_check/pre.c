int process(struct req *r) {
  char *p = r->data;
  int n = r->len;
  memcpy(out, p, n);
  return n;
}
