import hypothesis.strategies as hs

finite = hs.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
complex_number = hs.builds(complex, finite, finite)
complex_pair = hs.tuples(finite, finite).map(list)

disk_radius = hs.floats(min_value=0.05, max_value=0.95)
angle = hs.floats(min_value=0.01, max_value=3.13)
circle_angle = angle | angle.map(lambda t: -t)

dim = hs.integers(min_value=1, max_value=3)
width = hs.integers(min_value=1, max_value=5)
seed = hs.integers(min_value=0, max_value=2 ** 32 - 1)
potential = hs.floats(min_value=-3, max_value=3).filter(lambda b: abs(b) > 0.05)
