from stats import mean

assert mean([1, 2, 3]) == 2
assert mean([10]) == 10
try:
    mean([])
except ValueError:
    pass
else:
    raise AssertionError("expected ValueError for empty input")
print("ok")
