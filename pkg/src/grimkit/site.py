"""Static reference site: one page per entry and per topic.

Pages embed LaTeX source and leave typesetting to a client-side script
loaded from a configurable URL. Output depends only on the database and the
config, so rebuilding gives byte-identical files.
"""

import html
import os
import re
from dataclasses import dataclass, field

from .db import format_entry
from .expr import Symbol
from .latex import to_latex

__all__ = ["SiteConfig", "BuildResult", "build_site", "topic_slug", "render_fragment"]

DEFAULT_KATEX = "https://cdn.jsdelivr.net/npm/katex@0.16.9/dist"


@dataclass(frozen=True)
class SiteConfig:
    output_dir: str
    title: str = "Formula database"
    katex_url: str = DEFAULT_KATEX
    base_path: str = ""  # empty: relative links


@dataclass
class BuildResult:
    files: list = field(default_factory=list)
    errors: list = field(default_factory=list)  # (entry id, message)


def topic_slug(topic):
    s = topic.lower().replace(" ", "_")
    return re.sub(r"[^a-z0-9_\-]", "", s) or "topic"


def render_fragment(e, display=True):
    """HTML element carrying LaTeX source for client-side typesetting."""
    tag = "div" if display else "span"
    cls = "math display" if display else "math inline"
    return f'<{tag} class="{cls}">{html.escape(to_latex(e))}</{tag}>'


_STYLE = """body { font-family: sans-serif; max-width: 52em; margin: 2em auto; padding: 0 1em; }
.math.display { margin: 1em 0; overflow-x: auto; }
pre { background: #f4f4f4; padding: 0.8em; overflow-x: auto; }
ul.entries li { margin: 0.6em 0; }
"""

_TYPESET = """<script>
document.addEventListener("DOMContentLoaded", function () {
  document.querySelectorAll(".math").forEach(function (el) {
    katex.render(el.textContent, el, {displayMode: el.classList.contains("display"), throwOnError: false});
  });
});
</script>"""


def _page(cfg, title, body, depth):
    up = "../" * depth
    home = _href(cfg, up, "index.html")
    return "\n".join([
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{html.escape(title)} - {html.escape(cfg.title)}</title>",
        f'<link rel="stylesheet" href="{html.escape(cfg.katex_url)}/katex.min.css">',
        f'<script defer src="{html.escape(cfg.katex_url)}/katex.min.js"></script>',
        _TYPESET,
        f"<style>\n{_STYLE}</style>",
        "</head>",
        "<body>",
        f'<p><a href="{home}">{html.escape(cfg.title)}</a></p>',
        body,
        "</body>",
        "</html>",
        "",
    ])


def _href(cfg, up, target):
    if cfg.base_path:
        return cfg.base_path.rstrip("/") + "/" + target
    return up + target


def _entry_body(cfg, entry):
    up = "../"
    parts = [f"<h1>Entry {html.escape(entry.id)}</h1>"]
    if entry.description:
        parts.append(f"<p>{html.escape(entry.description)}</p>")
    parts.append(render_fragment(entry.formula))
    if entry.assumptions != Symbol("True_"):
        parts.append("<p>Assumptions:</p>")
        parts.append(render_fragment(entry.assumptions))
    if entry.variables:
        names = ", ".join(html.escape(to_latex(v)) for v in entry.variables)
        parts.append(f'<p>Variables: <span class="math inline">{names}</span></p>')
    if entry.topics:
        links = ", ".join(
            f'<a href="{_href(cfg, up, "topic/" + topic_slug(t) + ".html")}">{html.escape(t)}</a>'
            for t in entry.topics)
        parts.append(f"<p>Topics: {links}</p>")
    if entry.references:
        parts.append("<p>References:</p>\n<ul>")
        parts.extend(f"<li>{html.escape(r)}</li>" for r in entry.references)
        parts.append("</ul>")
    parts.append("<h2>Source</h2>")
    parts.append(f"<pre>{html.escape(format_entry(entry))}</pre>")
    return "\n".join(parts)


def _entry_list(cfg, entries, up):
    items = []
    for e in entries:
        link = _href(cfg, up, f"entry/{e.id}.html")
        items.append(f'<li><a href="{link}">{html.escape(e.id)}</a> '
                     f"{render_fragment(e.formula, display=False)}</li>")
    return '<ul class="entries">\n' + "\n".join(items) + "\n</ul>"


def _write(path, text, result):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    result.files.append(path)


def build_site(db, cfg):
    """Write index, entry and topic pages under ``cfg.output_dir``."""
    result = BuildResult()
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    rendered = []
    for entry in db:
        try:
            body = _entry_body(cfg, entry)
        except Exception as exc:  # keep building the rest of the site
            result.errors.append((entry.id, f"{type(exc).__name__}: {exc}"))
            body = f"<h1>Entry {html.escape(entry.id)}</h1>\n<p>Rendering failed.</p>"
        _write(os.path.join(out, "entry", f"{entry.id}.html"),
               _page(cfg, f"Entry {entry.id}", body, 1), result)
        rendered.append(entry)
    topics = db.topics()
    slugs = {}
    for t in topics:
        slug = topic_slug(t)
        if slug in slugs:
            result.errors.append(("", f"topics {slugs[slug]!r} and {t!r} share a page name"))
            continue
        slugs[slug] = t
        body = (f"<h1>{html.escape(t)}</h1>\n<p>{len(db.entries_for_topic(t))} entries</p>\n"
                + _entry_list(cfg, db.entries_for_topic(t), "../"))
        _write(os.path.join(out, "topic", f"{slug}.html"), _page(cfg, t, body, 1), result)
    topic_items = "\n".join(
        f'<li><a href="{_href(cfg, "", "topic/" + topic_slug(t) + ".html")}">{html.escape(t)}</a>'
        f" ({len(db.entries_for_topic(t))})</li>" for t in topics)
    body = "\n".join([
        f"<h1>{html.escape(cfg.title)}</h1>",
        f"<p>{len(db)} entries</p>",
        "<h2>Topics</h2>",
        f"<ul>\n{topic_items}\n</ul>" if topics else "<p>No topics.</p>",
        "<h2>Entries</h2>",
        _entry_list(cfg, rendered, "") if rendered else "<p>No entries.</p>",
    ])
    _write(os.path.join(out, "index.html"), _page(cfg, "Index", body, 0), result)
    return result
