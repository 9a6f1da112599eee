int init(struct dev *d) {
  int err = setup(d);
  if (err)
    goto out;
  err = start(d, 0);
out:
  return err;
}
