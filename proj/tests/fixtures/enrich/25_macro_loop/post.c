void walk(struct list *l) {
  struct node *n;
  int cnt = 0;
  list_for_each(n, l) {
    cnt += 2;
  }
  report(cnt);
}
