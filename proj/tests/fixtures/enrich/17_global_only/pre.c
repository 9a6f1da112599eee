#define MAX 16
static int limit = 8;

int get(void) {
  return limit;
}
