int drain(struct q *q) {
  int got = 0;
  do {
    got += pop(q);
  } while (got < 8);
  return got;
}
