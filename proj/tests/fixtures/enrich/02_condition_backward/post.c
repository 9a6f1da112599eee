int get(int *arr, int n, int k) {
  int i = k + 1;
  int j = i * 2;
  if (j < n) {
    return arr[j];
  }
  return -1;
}
