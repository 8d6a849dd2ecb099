from gaptlz.lib import get, remove_empty_values, split_list, to_mpf


def test_remove_empty_values() -> None:
    # List cases
    assert remove_empty_values([[], {}]) == []
    assert remove_empty_values(["a", [], {}, None]) == ["a"]
    # Dict cases
    assert remove_empty_values({"empty_list": [], "empty_dict": {}}) == {}
    assert remove_empty_values({"n": None, "digits": 20}) == {"digits": 20}
    # Nested cases
    assert remove_empty_values([{}, [None], [{"empty": {"dict": {"key": None}}}]]) == []
    assert remove_empty_values({"grid": {"n": [10, 20], "s": None}}) == {"grid": {"n": [10, 20]}}
    # Zero and False are content
    assert remove_empty_values({"s": 0, "validate": False}) == {"s": 0, "validate": False}


def test_get() -> None:
    config = {"grid": {"n": [10, 20], "theta0": "pi/2"}, "digits": 30}
    assert get(config, "digits") == 30
    assert get(config, "grid.n") == [10, 20]
    assert get(config, "n || grid.n") == [10, 20]
    assert get(config, "grid.s", default=[1]) == [1]
    assert get(None, "digits", default=20) == 20
    assert get({}, "digits") is None


def test_split_list() -> None:
    assert split_list("10,20, 40", int) == [10, 20, 40]
    assert split_list("pi/2, 2*pi/5") == ["pi/2", "2*pi/5"]
    assert split_list("[1, 2],{a: 1},3") == ["[1, 2]", "{a: 1}", "3"]
    assert split_list("1,,2", int) == [1, 2]
    assert [float(v) for v in split_list("0.5,exp(0)", to_mpf)] == [0.5, 1.0]
