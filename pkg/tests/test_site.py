import html
import os

from grimkit.db import load_default, loads
from grimkit.latex import to_latex
from grimkit.site import SiteConfig, build_site, render_fragment, topic_slug

from sitecheck import broken_links, tree_digest


def test_topic_slug():
    assert topic_slug("Modular forms") == "modular_forms"
    assert topic_slug("Lambert W-function") == "lambert_w-function"


def test_fragment_embeds_latex_source():
    from grimkit.parser import parse
    frag = render_fragment(parse("Pi"))
    assert r"\pi" in frag and 'class="math' in frag


def test_seed_site(tmp_path):
    db = load_default()
    out = tmp_path / "site"
    result = build_site(db, SiteConfig(str(out)))
    assert result.errors == []
    pages = tree_digest(out)
    assert "index.html" in pages
    for e in db:
        assert f"entry/{e.id}.html" in pages
    for t in db.topics():
        assert f"topic/{topic_slug(t)}.html" in pages
    assert len(pages) == 1 + len(db) + len(db.topics())
    assert broken_links(out) == []


def test_entry_page_contents(tmp_path):
    db = load_default()
    build_site(db, SiteConfig(str(tmp_path)))
    page = (tmp_path / "entry" / "0b5b04.html").read_text(encoding="utf-8")
    e = db.lookup("0b5b04")
    assert html.escape(to_latex(e.formula)) in page
    assert "Assumptions:" in page
    assert html.escape(r"k \in \mathbb{Z}_{\ge 2}") in page
    assert "EisensteinG(Mul(2, k)" in page
    assert "topic/modular_forms.html" in page
    index = (tmp_path / "index.html").read_text(encoding="utf-8")
    assert f"{len(db)} entries" in index
    topic = (tmp_path / "topic" / "modular_forms.html").read_text(encoding="utf-8")
    assert "entry/0b5b04.html" in topic


def test_references_listed(tmp_path):
    db = load_default()
    build_site(db, SiteConfig(str(tmp_path)))
    page = (tmp_path / "entry" / "e04f6a.html").read_text(encoding="utf-8")
    assert "DLMF 4.21.2" in page


def test_idempotent(tmp_path):
    db = load_default()
    cfg = SiteConfig(str(tmp_path / "a"), title="T", katex_url="https://example.org/k")
    build_site(db, cfg)
    first = tree_digest(tmp_path / "a")
    build_site(db, cfg)
    assert tree_digest(tmp_path / "a") == first
    build_site(db, SiteConfig(str(tmp_path / "b"), title="T", katex_url="https://example.org/k"))
    assert tree_digest(tmp_path / "b") == first


def test_script_url_configurable(tmp_path):
    build_site(load_default(), SiteConfig(str(tmp_path), katex_url="https://cdn.example/katex"))
    page = (tmp_path / "index.html").read_text(encoding="utf-8")
    assert 'src="https://cdn.example/katex/katex.min.js"' in page


def test_base_path_prefixes_links(tmp_path):
    build_site(load_default(), SiteConfig(str(tmp_path), base_path="/grim/"))
    page = (tmp_path / "entry" / "ad6c1c.html").read_text(encoding="utf-8")
    assert 'href="/grim/index.html"' in page


def test_empty_database(tmp_path):
    result = build_site(loads(""), SiteConfig(str(tmp_path / "new" / "dir")))
    assert sorted(tree_digest(tmp_path / "new" / "dir")) == ["index.html"]
    assert "0 entries" in (tmp_path / "new" / "dir" / "index.html").read_text()
    assert result.errors == []


def test_small_topic_db(tmp_path):
    db = loads('Entry(ID("aaaaaa"), Formula(Equal(1, 1)), Topics("Modular forms"), '
               'Description("<b>escaped</b>"))')
    build_site(db, SiteConfig(str(tmp_path)))
    assert os.path.isfile(tmp_path / "topic" / "modular_forms.html")
    page = (tmp_path / "entry" / "aaaaaa.html").read_text()
    assert "&lt;b&gt;escaped&lt;/b&gt;" in page
    assert broken_links(tmp_path) == []


def test_render_failure_is_collected(tmp_path, monkeypatch):
    import grimkit.site as site
    db = loads('Entry(ID("aaaaaa"), Formula(Equal(1, 1)))\nEntry(ID("bbbbbb"), Formula(Equal(2, 2)))')
    real = site._entry_body

    def flaky(cfg, entry):
        if entry.id == "aaaaaa":
            raise RuntimeError("boom")
        return real(cfg, entry)

    monkeypatch.setattr(site, "_entry_body", flaky)
    result = build_site(db, SiteConfig(str(tmp_path)))
    assert result.errors == [("aaaaaa", "RuntimeError: boom")]
    assert os.path.isfile(tmp_path / "entry" / "bbbbbb.html")
    assert os.path.isfile(tmp_path / "index.html")
