void reset(struct ctx *c) {
  int n = c->count;
  c->count = 0;
  c->buf[n] = 0;
  c->len = n;
}
