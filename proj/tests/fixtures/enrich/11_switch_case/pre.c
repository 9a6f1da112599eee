int code(int t) {
  int r = -1;
  switch (t) {
  case 1:
    r = 10;
    break;
  case 2:
    r = 20;
    break;
  }
  return r;
}
