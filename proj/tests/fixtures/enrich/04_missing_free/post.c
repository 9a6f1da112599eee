int load(const char *path) {
  char *buf = malloc(64);
  int fd = open(path, 0);
  if (fd < 0) {
    free(buf);
    return -1;
  }
  read(fd, buf, 64);
  free(buf);
  return 0;
}
