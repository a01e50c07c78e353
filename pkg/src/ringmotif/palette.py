# Categorical cycle for patterns, assigned in selection order.
PATTERN_COLORS = (
    "#1F77B4",
    "#FF7F0E",
    "#2CA02C",
    "#9467BD",
    "#8C564B",
    "#E377C2",
    "#17BECF",
    "#BCBD22",
    "#AEC7E8",
    "#FFBB78",
    "#98DF8A",
    "#C5B0D5",
)

WHITE = "#FFFFFF"
LIGHT_GRAY = "#D3D3D3"
DARK_GRAY = "#555555"
RED = "#D62728"
LINK_GRAY = "#888888"
BLACK = "#000000"


def pattern_color(index: int) -> str:
    return PATTERN_COLORS[index % len(PATTERN_COLORS)]
