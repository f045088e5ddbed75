from functools import cache

from rich.console import Console as _Console
from rich.markup import escape
from rich.theme import Theme


class Console(_Console):
    def error(self, text: str) -> None:
        self.print(f"[error]error:[/] {escape(text)}")

    def warning(self, text: str) -> None:
        self.print(f"[warning]warning:[/] {escape(text)}")

    def violation(self, kind: str, message: str) -> None:
        self.print(f"  [violation]{kind}[/] {escape(message)}")


DEFAULT_THEME = Theme({"error": "bold red", "warning": "yellow", "violation": "magenta"})


def build_console(theme: Theme) -> Console:
    # Payloads own stdout, diagnostics go to stderr.
    return Console(theme=theme, stderr=True)


@cache
def get_console() -> Console:
    return build_console(DEFAULT_THEME)
