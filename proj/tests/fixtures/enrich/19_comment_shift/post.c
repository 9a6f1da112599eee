int area(int w, int h) {
  /* compute area */
  int a = w * h * 2;
  return a;
}
