"""Figure rendering for path records.

Batch-only: figures go straight to files through the Agg backend, with
the hash salt pinned and the timestamp stripped so repeated runs of the
same scenario produce stable output.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_paths"]

# classical dashed, semiclassical and quantum solid
STYLES = {
    "classical": dict(color="tab:green", linestyle="--"),
    "semiclassical": dict(color="tab:red", linestyle="-"),
    "quantum": dict(color="tab:blue", linestyle="-"),
}


def render_paths(record, path, title=None):
    """Plot q(t) for the available path families and save the figure."""
    plt.rcParams["svg.hashsalt"] = "ehrenfest-paths"
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(record.t, record.q_c, label="classical", **STYLES["classical"])
    ax.plot(record.t, record.q_sc, label="semiclassical", **STYLES["semiclassical"])
    if record.has_quantum:
        ax.plot(record.t, record.q_qm, label="quantum", **STYLES["quantum"])
    ax.set_xlabel("t")
    ax.set_ylabel("q")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
    return path
