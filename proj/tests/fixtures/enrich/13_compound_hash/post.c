unsigned hash(const char *s) {
  unsigned h = 5381;
  int c;
  while ((c = *s++))
    h = (h << 5) + h + c;
  return h;
}
