#define MAX 32
static int limit = 4;

int get(void) {
  return limit;
}
