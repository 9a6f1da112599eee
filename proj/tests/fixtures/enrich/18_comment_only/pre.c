int id(int x) {
  /* identity */
  return x;
}
