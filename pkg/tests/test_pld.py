import pytest

from lodprobe import NoPldError, pld, registrable_domain, try_pld


class TestPld:
    def test_dbpedia_example(self):
        assert pld("http://dbpedia.org/resource/Malta") == "dbpedia.org"

    def test_multi_label_public_suffix(self):
        assert pld("https://data.gov.uk/x") == "data.gov.uk"
        assert pld("http://www.example.co.uk/page") == "example.co.uk"

    def test_subdomains_collapse_to_registrable(self):
        assert pld("http://deep.sub.dbpedia.org/x") == "dbpedia.org"
        assert pld("http://a.b.c.data.gov.uk/") == "data.gov.uk"

    def test_port_userinfo_and_case(self):
        assert pld("http://User@WWW.DBpedia.ORG:8080/x") == "dbpedia.org"

    def test_https_scheme(self):
        assert pld("https://w3.org/ns") == "w3.org"

    @pytest.mark.parametrize(
        "bad",
        [
            "_:b0",
            "urn:isbn:0451450523",
            "ftp://files.example.org/x",
            "mailto:someone@example.org",
            "http:///nohost",
            "http://192.168.1.10/x",
            "relative/path",
            "",
        ],
    )
    def test_no_pld_cases(self, bad):
        with pytest.raises(NoPldError):
            pld(bad)
        assert try_pld(bad) is None

    def test_bare_public_suffix_has_no_pld(self):
        with pytest.raises(NoPldError):
            pld("http://co.uk/")
        with pytest.raises(NoPldError):
            pld("http://com/")

    def test_unknown_suffix_falls_back_to_last_two_labels(self):
        assert pld("http://site.example.zz-unknown/x") == "example.zz-unknown"
        assert pld("http://example.zz-unknown/") == "example.zz-unknown"


class TestRegistrableDomain:
    def test_wildcard_rule(self):
        # *.ck makes <label>.ck a public suffix...
        assert registrable_domain("a.b.test.ck") == "b.test.ck"
        with pytest.raises(NoPldError):
            registrable_domain("test.ck")

    def test_exception_rule(self):
        # ...except www.ck, which is registrable directly.
        assert registrable_domain("www.ck") == "www.ck"
        assert registrable_domain("sub.www.ck") == "www.ck"

    def test_trailing_dot_stripped(self):
        assert registrable_domain("dbpedia.org.") == "dbpedia.org"

    def test_ipv6_rejected(self):
        with pytest.raises(NoPldError):
            registrable_domain("::1")

    def test_empty_label_rejected(self):
        with pytest.raises(NoPldError):
            registrable_domain("a..b.org")
