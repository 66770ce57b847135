def pytest_collection_modifyitems(items):
    # certification of the reference oracles runs before everything else
    items.sort(key=lambda item: 0 if "test_oracles" in item.nodeid else 1)
