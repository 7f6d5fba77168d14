#include <doctest.h>

#include <thread>

#include "probepack/core.hpp"
#include "probepack/vocabulary.hpp"

using namespace probepack;

TEST_CASE("object names round trip through parse and str") {
    for (const auto& entry : vocabulary14()) {
        ObjectName parsed = parse_object_name(entry.name);
        CHECK(parsed.str() == entry.name);
        CHECK(parsed.ordinal == 1);
        CHECK(shape_dimension(parsed.shape) == parsed.dimension);
    }
    ObjectName with_suffix = parse_object_name("white_3D_cylinder_3");
    CHECK(with_suffix.ordinal == 3);
    CHECK(with_suffix.str() == "white_3D_cylinder_3");
}

TEST_CASE("malformed names are rejected") {
    CHECK_THROWS_AS(parse_object_name(""), MalformedName);
    CHECK_THROWS_AS(parse_object_name("red_cuboid"), MalformedName);          // no dimension
    CHECK_THROWS_AS(parse_object_name("red_3D_zigzag"), MalformedName);       // unknown shape
    CHECK_THROWS_AS(parse_object_name("red_2D_cuboid"), MalformedName);       // wrong dimension
    CHECK_THROWS_AS(parse_object_name("red_3D_cuboid_1"), MalformedName);     // suffixes start at 2
    CHECK_THROWS_AS(parse_object_name("red_3D_cuboid_02"), MalformedName);    // leading zero
    CHECK_THROWS_AS(parse_object_name("red_3D_cuboid_0"), MalformedName);
    CHECK_THROWS_AS(parse_object_name("red_3D_cuboid_-2"), MalformedName);
    CHECK_THROWS_AS(parse_object_name("_3D_cuboid"), MalformedName);          // empty color
    CHECK(is_valid_object_name("red_3D_cuboid_2"));
    CHECK_FALSE(is_valid_object_name("red_3D"));
}

TEST_CASE("every shape maps to exactly one dimension") {
    int d1 = 0, d2 = 0, d3 = 0;
    for (Shape s : all_shapes()) {
        switch (shape_dimension(s)) {
            case Dimension::d1: ++d1; break;
            case Dimension::d2: ++d2; break;
            case Dimension::d3: ++d3; break;
        }
        CHECK(parse_shape(to_string(s)) == s);
    }
    CHECK(d1 == 1);
    CHECK(d2 == 5);
    CHECK(d3 == 7);
}

TEST_CASE("duplicate descriptors get ordinal suffixes in input order") {
    std::vector<VisualDescriptor> ds = {
        {"white", Dimension::d3, Shape::cylinder},
        {"yellow", Dimension::d2, Shape::rectangle},
        {"white", Dimension::d3, Shape::cylinder},
        {"white", Dimension::d3, Shape::cylinder},
        {"yellow", Dimension::d2, Shape::rectangle},
    };
    auto names = assign_names(ds);
    CHECK(names == std::vector<std::string>{"white_3D_cylinder", "yellow_2D_rectangle",
                                            "white_3D_cylinder_2", "white_3D_cylinder_3",
                                            "yellow_2D_rectangle_2"});
}

TEST_CASE("property predicates") {
    CHECK(property_predicate(Property::rigid) == "is_rigid");
    CHECK(property_predicate(Property::compressible) == "is_compressible");
    for (Property p : all_properties()) CHECK(parse_property(to_string(p)) == p);
}

TEST_CASE("world validation catches structural damage") {
    auto records = labeled_records_for_names({"red_3D_cuboid", "yellow_3D_cuboid"});
    WorldState s = make_initial_state(records);
    CHECK_NOTHROW(validate_world(s));
    CHECK_NOTHROW(validate_world_strict(s));

    SUBCASE("duplicate name") {
        s.objects[1].name = s.objects[0].name;
        CHECK_THROWS_AS(validate_world(s), Error);
    }
    SUBCASE("holding while hand empty") {
        s.holding = 0;
        CHECK_THROWS_AS(validate_world(s), Error);
    }
    SUBCASE("member out of range") {
        s.box.members.push_back(7);
        CHECK_THROWS_AS(validate_world(s), Error);
    }
    SUBCASE("duplicate member") {
        s.box.members = {0, 0};
        CHECK_THROWS_AS(validate_world(s), Error);
    }
    SUBCASE("membership without the in_bin flag only trips the strict form") {
        s.box.members = {0};
        CHECK_NOTHROW(validate_world(s));
        CHECK_THROWS_AS(validate_world_strict(s), Error);
    }
}

TEST_CASE("fingerprint ignores placement order but sees content") {
    auto records = labeled_records_for_names({"red_3D_cuboid", "yellow_3D_cuboid"});
    WorldState a = make_initial_state(records);
    a.objects[0].in_bin = true;
    a.objects[1].in_bin = true;
    WorldState b = a;
    a.box.members = {0, 1};
    b.box.members = {1, 0};
    CHECK(fingerprint(a) == fingerprint(b));

    WorldState c = a;
    c.objects[0].is_pushed = true;
    CHECK(fingerprint(a) != fingerprint(c));
}

TEST_CASE("knowledge base keeps the first written value") {
    KnowledgeBase kb;
    kb.insert("black_1D_line", Property::bendable);
    CHECK(kb.lookup("black_1D_line") == Property::bendable);
    CHECK(kb.lookup("gray_1D_line") == std::nullopt);

    const auto v = kb.version();
    CHECK_NOTHROW(kb.insert("black_1D_line", Property::bendable));  // same value is fine
    CHECK(kb.version() > v);
    CHECK_THROWS_AS(kb.insert("black_1D_line", Property::plastic), PropertyConflict);
    CHECK(kb.lookup("black_1D_line") == Property::bendable);
    CHECK(kb.size() == 1);
}

TEST_CASE("knowledge base json and file round trip") {
    KnowledgeBase kb;
    kb.insert("black_1D_line", Property::bendable);
    kb.insert("white_3D_cylinder", Property::compressible);

    KnowledgeBase back = KnowledgeBase::from_json_text(kb.to_json_text());
    CHECK(back.snapshot() == kb.snapshot());

    const std::string path = "kb_roundtrip_test.json";
    kb.save(path);
    CHECK(KnowledgeBase::load(path).snapshot() == kb.snapshot());
    std::remove(path.c_str());

    CHECK_THROWS_AS(KnowledgeBase::load("does_not_exist.json"), FileError);
    CHECK_THROWS_AS(KnowledgeBase::from_json_text("not json"), FileError);
}

TEST_CASE("knowledge base survives concurrent writers") {
    KnowledgeBase kb;
    auto writer = [&kb](int base) {
        for (int i = 0; i < 50; ++i) {
            kb.insert("white_3D_cylinder_" + std::to_string(2 + base * 50 + i),
                      Property::compressible);
            kb.snapshot();
        }
    };
    std::thread a(writer, 0), b(writer, 1);
    a.join();
    b.join();
    CHECK(kb.size() == 100);
}

TEST_CASE("text file io") {
    const std::string path = "text_io_test.txt";
    write_text_file(path, "one\ntwo\n");
    CHECK(read_text_file(path) == "one\ntwo\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("missing_file.txt"), FileError);
}
