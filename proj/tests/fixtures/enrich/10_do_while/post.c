int drain(struct q *q) {
  int got = 0;
  do {
    got += pop(q);
  } while (got < 16);
  return got;
}
