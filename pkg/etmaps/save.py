from pathlib import Path

from etmaps.exceptions import InvalidFlagMap
from etmaps.flagmap import FlagMap

FORMAT_HEADER = "flags"
GENERATORS = ("r0", "r1", "r2")


def dumps(m):
    """Encodes a map in the ``flagmap v1`` text format.

    Line 1 is ``flags N``; lines 2-4 are ``r0``, ``r1`` and ``r2`` followed by the
    N zero-based images. Fixed points encode boundary flags.
    """
    lines = [f"{FORMAT_HEADER} {m.n_flags}"]
    for name, r in zip(GENERATORS, m.gens):
        lines.append(" ".join([name] + [str(int(i)) for i in r]))
    return "\n".join(lines) + "\n"


def loads(text):
    """Decodes ``flagmap v1`` text.

    Raises
    ------
    InvalidFlagMap
        If the text is malformed or the arrays violate the map axioms.
    """
    lines = [line.split() for line in text.strip().splitlines() if line.strip()]
    if len(lines) != 4:
        raise InvalidFlagMap(f"expected 4 lines, got {len(lines)}")
    header = lines[0]
    if len(header) != 2 or header[0] != FORMAT_HEADER or not header[1].isdigit():
        raise InvalidFlagMap(f"line 1: expected 'flags N', got {' '.join(header)!r}")
    n = int(header[1])
    gens = []
    for lineno, (name, tokens) in enumerate(zip(GENERATORS, lines[1:]), start=2):
        if not tokens or tokens[0] != name:
            raise InvalidFlagMap(f"line {lineno}: expected '{name}'")
        if len(tokens) - 1 != n:
            raise InvalidFlagMap(f"line {lineno}: expected {n} images, got {len(tokens) - 1}")
        try:
            gens.append([int(t) for t in tokens[1:]])
        except ValueError:
            raise InvalidFlagMap(f"line {lineno}: images must be integers")
    return FlagMap(*gens)


class MapSerialiser:
    def __init__(self, logger):
        self.logger = logger

    def _save_map(self, m, path, name="map.flagmap"):
        """Writes a map to disk in ``flagmap v1`` format.

        Parameters
        ----------
        m : FlagMap
            Map to save.
        path : str, Path or None
            File or directory. If None, the map is written to ``name`` in the
            working directory; if a directory, to ``name`` inside it.
        name : str
            File name used when ``path`` is None or a directory.

        Returns
        -------
        Path
            The file written.
        """
        full_path = self._prepare_path(path, name)
        try:
            full_path.write_text(dumps(m))
            self.logger.info(f"map with {m.n_flags} flags saved to {full_path}")
        except Exception as e:
            self.logger.error(f"Failed to save map to {full_path}: {e}")
            raise
        return full_path

    def _load_map(self, path):
        """Reads a ``flagmap v1`` file.

        Parameters
        ----------
        path : str or Path
            Path to load the map from.
        """
        path = Path(path)
        try:
            m = loads(path.read_text())
            self.logger.info(f"map loaded from {path}")
            return m
        except Exception as e:
            self.logger.error(f"Failed to load map from {path}: {e}")
            raise

    def _prepare_path(self, path, name):
        """Prepares path for saving a map."""
        if path is None:
            full_path = Path(name)
        else:
            full_path = Path(path)
            if full_path.is_dir():
                full_path = full_path / name

        full_path.parent.mkdir(parents=True, exist_ok=True)
        return full_path
