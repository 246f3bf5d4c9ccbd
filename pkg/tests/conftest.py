def pytest_terminal_summary(terminalreporter):
    lines = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            if rep.when != "call":
                continue
            lines += [value for key, value in rep.user_properties if key == "acceptance"]
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    # numbered criteria first, companions right after their parent
    for line in sorted(lines, key=_order):
        terminalreporter.write_line(line)


def _order(line):
    tag = line[1 : line.index("]")]
    digits = tag.rstrip("abcdefghijklmnopqrstuvwxyz")
    return int(digits), tag[len(digits) :]
