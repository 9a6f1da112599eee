int area(int w, int h) {
  /* compute area */
  int a = w * h;
  return a;
}
