#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bgptypo/errors.hpp"
#include "bgptypo/ingest.hpp"
#include "fixtures.hpp"
#include "harness.hpp"

#include <random>
#include <sstream>

using namespace bgptypo;

TEST_SUITE_BEGIN("ingest");

TEST_CASE("canonical line becomes one route entry") {
    std::istringstream in("1498867200|rv2|3741|2.58.168.0/22|"
                          "3741 9002 29278 29728 29278 29278 29278 29278 29278 42864\n");
    Snapshot snap = load_snapshot(in, "canonical-text", "2017-07");
    REQUIRE(snap.entries.size() == 1);
    const RouteEntry& e = snap.entries[0];
    CHECK(e.timestamp == 1498867200);
    CHECK(e.collector == "rv2");
    CHECK(e.peer_asn.value == 3741);
    CHECK(e.prefix.to_string() == "2.58.168.0/22");
    CHECK(e.path.size() == 10);
    CHECK(e.path.origin().text == "42864");
    CHECK(snap.collectors == std::set<std::string>{"rv2"});
}

TEST_CASE("empty input yields an empty snapshot and a warning") {
    std::istringstream in("");
    LoadStats stats;
    Snapshot snap = load_snapshot(in, "canonical-text", "2017-01", {}, &stats);
    CHECK(snap.entries.empty());
    REQUIRE_FALSE(stats.warnings.empty());
}

TEST_CASE("garbage lines are skipped and counted") {
    std::istringstream in("1|rv1|1|10.0.0.0/24|1 2 3\n"
                          "this is not a route\n"
                          "2|rv1|1|10.0.1.0/24|1 2 4\n");
    LoadStats stats;
    Snapshot snap = load_snapshot(in, "canonical-text", "2017-01", {}, &stats);
    CHECK(snap.entries.size() == 2);
    CHECK(stats.skipped == 1);
}

TEST_CASE("comment lines and blank lines are free") {
    std::istringstream in("# header\n\n1|rv1|1|10.0.0.0/24|1 2 3\n");
    LoadStats stats;
    Snapshot snap = load_snapshot(in, "canonical-text", "2017-01", {}, &stats);
    CHECK(snap.entries.size() == 1);
    CHECK(stats.comments == 1);
    CHECK(stats.skipped == 0);
}

TEST_CASE("a corrupt feed fails once past the malformed-line budget") {
    std::ostringstream text;
    for (int i = 0; i < 30; ++i)
        text << "garbage line " << i << "\n";
    text << "1|rv1|1|10.0.0.0/24|1 2 3\n";
    std::istringstream in(text.str());
    CHECK_THROWS_AS(load_snapshot(in, "canonical-text", "2017-01"), CorruptInputError);
}

TEST_CASE("small fixtures stay under the absolute error floor") {
    // One bad line of three is 33%, far over the rate, but below the floor.
    std::istringstream in("1|rv1|1|10.0.0.0/24|1 2 3\njunk\n2|rv1|1|10.0.1.0/24|1 2 4\n");
    LoadStats stats;
    Snapshot snap = load_snapshot(in, "canonical-text", "2017-01", {}, &stats);
    CHECK(snap.entries.size() == 2);
    CHECK(stats.skipped == 1);
}

TEST_CASE("labels must name a calendar month") {
    std::istringstream in("");
    CHECK_THROWS_AS(load_snapshot(in, "canonical-text", "2017-13"), ParseError);
    std::istringstream in2("");
    CHECK_THROWS_AS(load_snapshot(in2, "canonical-text", "bogus"), ParseError);
}

TEST_CASE("unknown formats are rejected; registered readers are found") {
    std::istringstream in("");
    CHECK_THROWS_AS(load_snapshot(in, "mrt-table-dump-v2", "2017-01"), ParseError);

    register_snapshot_reader("null-reader",
                             [](std::istream&, std::string_view label, const LoadOptions&,
                                LoadStats*) {
                                 Snapshot s;
                                 s.label = std::string(label);
                                 return s;
                             });
    std::istringstream in2("ignored");
    Snapshot snap = load_snapshot(in2, "null-reader", "2017-01");
    CHECK(snap.entries.empty());
    auto formats = snapshot_formats();
    CHECK(std::count(formats.begin(), formats.end(), "canonical-text") == 1);
    CHECK(std::count(formats.begin(), formats.end(), "null-reader") == 1);
}

TEST_CASE("loading identical bytes twice gives identical snapshots") {
    std::string text = fixtures::rib_text();
    std::istringstream a(text), b(text);
    Snapshot s1 = load_snapshot(a, "canonical-text", "2017-01");
    Snapshot s2 = load_snapshot(b, "canonical-text", "2017-01");
    REQUIRE(s1.entries.size() == s2.entries.size());
    for (std::size_t i = 0; i < s1.entries.size(); ++i) {
        CHECK(s1.entries[i].path.to_string() == s2.entries[i].path.to_string());
        CHECK(s1.entries[i].prefix == s2.entries[i].prefix);
    }
    CHECK(s1.collectors == s2.collectors);
}

TEST_CASE("collectors reflect exactly what was seen") {
    std::istringstream in("1|rrc0|1|10.0.0.0/24|1 2 3\n"
                          "1|rv3|1|10.0.1.0/24|1 2 4\n"
                          "1|rrc0|9|10.0.2.0/24|9 2 4\n");
    Snapshot snap = load_snapshot(in, "canonical-text", "2017-01");
    CHECK(snap.collectors == std::set<std::string>{"rrc0", "rv3"});
}

TEST_CASE("snapshot file labels come from the name or the timestamps") {
    harness::TempDir dir;
    harness::write_file(dir / "2019-12.rib", "1|rv1|1|10.0.0.0/24|1 2 3\n");
    CHECK(load_snapshot_file(dir / "2019-12.rib").label == "2019-12");

    // 1498867200 is in July 2017.
    harness::write_file(dir / "routes.txt", "1498867200|rv1|1|10.0.0.0/24|1 2 3\n");
    CHECK(load_snapshot_file(dir / "routes.txt").label == "2017-07");

    harness::write_file(dir / "empty.txt", "");
    CHECK_THROWS_AS(load_snapshot_file(dir / "empty.txt"), ParseError);
    CHECK_THROWS_AS(load_snapshot_file(dir / "missing.rib"), IoError);
}

TEST_CASE("ownership rows merge owners and resolve by longest match") {
    std::istringstream in("155.133.83.0/24\t199250\n"
                          "10.0.0.0/8\t65000\n"
                          "10.1.0.0/16\t65001\n"
                          "10.1.0.0/16\t65002\n");
    OwnershipDb db = load_ownership(in);
    CHECK(db.size() == 3);

    auto owner = longest_prefix_owner(db, Prefix::parse("155.133.83.0/24"));
    REQUIRE(owner.has_value());
    CHECK(*owner == std::set<std::uint64_t>{199250});

    auto merged = longest_prefix_owner(db, Prefix::parse("10.1.2.0/24"));
    REQUIRE(merged.has_value());
    CHECK(*merged == std::set<std::uint64_t>{65001, 65002});

    auto broad = longest_prefix_owner(db, Prefix::parse("10.2.0.0/24"));
    REQUIRE(broad.has_value());
    CHECK(*broad == std::set<std::uint64_t>{65000});

    CHECK_FALSE(longest_prefix_owner(db, Prefix::parse("11.0.0.0/24")).has_value());
}

TEST_CASE("registry loads countries and rejects conflicts") {
    std::istringstream in("3255\tUA\n49284\tIT\n49824\tUA\n");
    AsnRegistry reg = load_registry(in);
    CHECK(reg.country_of(3255) == std::string("UA"));
    CHECK(reg.country_of(49284) == std::string("IT"));
    CHECK(reg.country_of(49824) == std::string("UA"));
    CHECK_FALSE(reg.country_of(1).has_value());

    std::istringstream conflict("5\tUS\n5\tBR\n");
    CHECK_THROWS_AS(load_registry(conflict), ParseError);

    // Re-stating the same fact is harmless.
    std::istringstream repeat("5\tUS\n5\tUS\n");
    CHECK(load_registry(repeat).size() == 1);

    std::istringstream lowercase("5\tus\n");
    CHECK_THROWS_AS(load_registry(lowercase), ParseError);
}

TEST_CASE("adjacency is symmetric and reflexive") {
    std::istringstream in("UA\tPL\n");
    CountryAdjacency adj = load_adjacency(in);
    CHECK(adj.adjacent("UA", "PL"));
    CHECK(adj.adjacent("PL", "UA"));
    CHECK(adj.adjacent("IT", "IT"));
    CHECK_FALSE(adj.adjacent("UA", "IT"));
}

TEST_CASE("whitelist keys must stay in the stub range") {
    std::istringstream in("3\t174\n3\t701\n12\t3356\n");
    UpstreamWhitelist wl = load_whitelist(in);
    CHECK(wl.allows(3, 174));
    CHECK(wl.allows(3, 701));
    CHECK_FALSE(wl.allows(3, 9002));
    CHECK_FALSE(wl.allows(4, 174));

    std::istringstream bad("55\t174\n");
    CHECK_THROWS_AS(load_whitelist(bad), ParseError);
}

TEST_CASE("malformed database rows report their line number") {
    std::istringstream in("155.133.83.0/24\t199250\nnot-a-prefix\t5\n");
    try {
        load_ownership(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("property: trie lookup agrees with a linear containment scan") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 10; ++round) {
        OwnershipDb db;
        struct Row {
            Prefix prefix;
            std::uint64_t asn;
        };
        std::vector<Row> rows;
        int n = 1 + static_cast<int>(rng() % 1000);
        for (int i = 0; i < n; ++i) {
            Prefix p = Prefix::make(static_cast<std::uint32_t>(rng()), 4 + rng() % 29);
            std::uint64_t asn = 1 + rng() % 100000;
            db.add(p, asn);
            rows.push_back({p, asn});
        }
        for (int q = 0; q < 200; ++q) {
            Prefix query = Prefix::make(static_cast<std::uint32_t>(rng()), rng() % 33);
            std::optional<std::set<std::uint64_t>> expect;
            int best_len = -1;
            for (const Row& row : rows) {
                if (!row.prefix.contains(query) || row.prefix.length < best_len)
                    continue;
                if (row.prefix.length > best_len) {
                    best_len = row.prefix.length;
                    expect = std::set<std::uint64_t>{};
                }
                expect->insert(row.asn);
            }
            CHECK(longest_prefix_owner(db, query) == expect);
        }
    }
}

TEST_SUITE_END();
