void set_len(struct buf *b, int n) {
  int cap = b->cap;
  if (n > cap)
    n = cap;
  b->len = n;
  b->data[n] = 0;
}
