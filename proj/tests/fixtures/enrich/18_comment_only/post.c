int id(int x) {
  /* identity function */
  return x;
}
