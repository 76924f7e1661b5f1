"""Writes g17.txt: IEEE bits and C-style '%.17g' text for a spread of doubles."""
import random
import struct

random.seed(20240611)
values = [0.0, -0.0, 1.0, -1.0, 0.1, 0.5, 2.0 ** -1074, 1.7976931348623157e308, 1e16, 1e17, 9.999999999999999e16, 1e-4, 9.99999e-5]
for _ in range(400):
    mag = random.uniform(-30, 30)
    values.append(random.choice([-1, 1]) * random.random() * 10 ** mag)
for _ in range(100):
    values.append(float(random.randint(-10 ** 6, 10 ** 6)))
with open("g17.txt", "w") as f:
    for v in values:
        bits = struct.unpack("<Q", struct.pack("<d", v))[0]
        f.write("%016x %s\n" % (bits, "%.17g" % v))
