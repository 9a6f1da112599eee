int process(struct req *r) {
  char *p = r->data;
  int n = r->len;
  if (p == NULL)
    return -1;
  memcpy(out, p, n);
  return n;
}
