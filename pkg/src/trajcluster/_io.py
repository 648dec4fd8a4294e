"""Small I/O helpers shared by the loaders and exporters."""

import io
import os


def open_text(source):
    """Return ``(text_stream, name, should_close)`` for a path, bytes stream or text stream."""
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8", newline=""), os.fspath(source), True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8")), None, False
    if isinstance(source, io.TextIOBase):
        return source, getattr(source, "name", None), False
    # binary file-like
    return io.TextIOWrapper(source, encoding="utf-8", newline=""), getattr(source, "name", None), False


def data_lines(stream):
    """Yield ``(line_number, stripped_line)`` skipping blank and ``#`` comment lines."""
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def fmt_float(x):
    """Serialize a float with 12 significant digits."""
    return format(float(x), ".12g")
