#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "gcrl/core/rng.hpp"
#include "gcrl/lang/augment.hpp"
#include "gcrl/lang/classify.hpp"
#include "gcrl/lang/codec.hpp"
#include "gcrl/lang/dataset.hpp"
#include "gcrl/lang/generate.hpp"
#include "gcrl/lang/normalize.hpp"
#include "gcrl/lang/prims.hpp"
#include "gcrl/lang/translate.hpp"
#include "lang_props.hpp"

using namespace gcrl;
using namespace gcrl::lang;
using gridbuild::BlockColor;
using gridbuild::BlockSpec;
using gridbuild::Cell;

namespace {

const char* kTable1Coords = "(0, 5, 5, 3), (0, 6, 5, 3), (0, 7, 5, 3), (0, 8, 5, 3), (0, 9, 5, 3)";

std::vector<CoordEntry> expected_table1() {
  std::vector<CoordEntry> v;
  for (int x = 5; x <= 9; ++x) v.push_back({{x, 0, 5}, 3});
  return v;
}

std::set<std::pair<Cell, int>> as_set(const std::vector<CoordEntry>& v) {
  std::set<std::pair<Cell, int>> s;
  for (const auto& e : v) s.insert({e.cell, e.color_id});
  return s;
}

}  // namespace

TEST(Coords, Table1RowIsGroundLevelRedRow) {
  EXPECT_EQ(parse_coords(kTable1Coords), expected_table1());
  EXPECT_EQ(format_coords(parse_coords(kTable1Coords)), kTable1Coords);
}

TEST(Coords, EmptyAndErrors) {
  EXPECT_TRUE(parse_coords("").empty());
  EXPECT_THROW(parse_coords("(0,0,0,7)"), ParseError);
  EXPECT_THROW(parse_coords("(0,0,0)"), ParseError);
  EXPECT_THROW(parse_coords("(9,0,0,1)"), ParseError);  // y = 9 is above the volume
  try {
    parse_coords("(0, 5, 5, 3), (0, 6, 5, 9)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.begin(), 14u);
  }
}

TEST(Coords, AppendixConventionReadsZUp) {
  const auto v = parse_coords("(5, 5, 0, 6), (5, 5, 5, 6)", AxisConvention::appendix());
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].cell, (Cell{5, 0, 5}));
  EXPECT_EQ(v[1].cell, (Cell{5, 5, 5}));
}

TEST(Prims, Table1PrimExpandsToTable1Coords) {
  const auto prims = parse_prims("(0, 5, 5), (1, 1, 5), eastsky, red");
  ASSERT_EQ(prims.size(), 1u);
  EXPECT_EQ(expand_primitive(prims[0]), expected_table1());
  EXPECT_EQ(format_prims(prims), "(0, 5, 5), (1, 1, 5), eastsky, red");
}

TEST(Prims, BoxToPrimitivePicksTable1Tag) {
  const PrimitiveSpec p = box_to_primitive({5, 0, 5}, {5, 1, 1}, 3);
  EXPECT_EQ(format_primitive(p), "(0, 5, 5), (1, 1, 5), eastsky, red");
}

TEST(Prims, EveryTagRoundTripsThroughBoxes) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    PrimitiveSpec p;
    p.rotation = static_cast<Rotation>(rng.below(6));
    p.size = {rng.uniform_int(1, 3), rng.uniform_int(1, 3), rng.uniform_int(1, 3)};
    p.start = {0, 1, 2};
    p.color_id = rng.uniform_int(0, 6);
    const auto cells = expand_primitive(p);
    EXPECT_EQ(cells.size(), static_cast<std::size_t>(p.size[0] * p.size[1] * p.size[2]));
    const Cell ext = primitive_extent(p);
    const PrimitiveSpec q = box_to_primitive(AxisConvention{}.to_canonical(p.start), ext, p.color_id);
    EXPECT_EQ(as_set(expand_primitive(q)), as_set(cells));
    EXPECT_EQ(parse_prims(format_primitive(p)), std::vector<PrimitiveSpec>{p});
  }
}

TEST(Prims, Errors) {
  EXPECT_THROW(parse_prims("(0, 5, 5), (1, 0, 5), eastsky, red"), ParseError);
  EXPECT_THROW(parse_prims("(0, 5, 5), (1, 1, 5), upward, red"), ParseError);
  EXPECT_THROW(parse_prims("(0, 5, 5), (1, 1, 5), eastsky, teal"), ParseError);
  EXPECT_THROW(expand_primitive(parse_prims("(0, 5, 5), (1, 1, 7), eastsky, red")[0]), ConfigError);
}

TEST(Normalize, SingleBlockMovesToCenter) {
  const auto out = normalize_blocks({{{0, 0, 0}, BlockColor::Red}});
  EXPECT_EQ(out.front().cell, (Cell{5, 0, 5}));
}

TEST(Normalize, ClampAndReport) {
  std::vector<BlockSpec> blocks = {{{0, 0, 0}, BlockColor::Red}, {{10, 0, 0}, BlockColor::Red}};
  try {
    normalize_blocks(blocks);
    FAIL();
  } catch (const NormalizeError& e) {
    ASSERT_EQ(e.clamped().size(), 2u);
    EXPECT_EQ(e.clamped()[1].cell, (Cell{10, 0, 5}));
  }
}

TEST(Classify, Exemplars) {
  std::vector<Cell> row, column;
  for (int x = 0; x < 5; ++x) row.push_back({x, 0, 5});
  for (int y = 0; y < 6; ++y) column.push_back({5, y, 5});
  EXPECT_EQ(to_string(classify_figure(row)), "floor,flat");
  EXPECT_EQ(to_string(classify_figure(column)), "tall");
  EXPECT_EQ(to_string(classify_figure(std::vector<Cell>{{5, 3, 5}})), "air");
  EXPECT_THROW(classify_figure(std::vector<Cell>{}), ConfigError);
}

TEST(Translate, Table1Instruction) {
  const auto plan = translate("place 5 red blocks in a row, one row north of center", taskman::EnvKind::GridBuild);
  EXPECT_EQ(to_coord_entries(plan.subtasks), expected_table1());
  const auto tagged = translate("<Architect> Place 5 red blocks in a row, one row north of center.",
                                taskman::EnvKind::GridBuild);
  EXPECT_EQ(tagged.subtasks, plan.subtasks);
}

TEST(Translate, AppendixColumn) {
  const auto plan =
      translate("column/tower of 6 yellow blocks in the middle of the grid", taskman::EnvKind::GridBuild);
  std::vector<CoordEntry> want;
  for (int y = 0; y < 6; ++y) want.push_back({{5, y, 5}, 6});
  EXPECT_EQ(to_coord_entries(plan.subtasks), want);
}

TEST(Translate, Figure3Survival) {
  const auto plan = translate("Vanquish the undead foe, gather a single unit of metallic mineral, and forge an iron weapon.",
                              taskman::EnvKind::TechLite);
  using techlite::Achievement;
  const std::vector<taskman::Subtask> want = {taskman::Achieve{Achievement::DefeatZombie, 1},
                                              taskman::Achieve{Achievement::CollectIron, 1},
                                              taskman::Achieve{Achievement::MakeIronSword, 1}};
  EXPECT_EQ(plan.subtasks, want);
}

TEST(Translate, UnknownTokenCitesSpan) {
  const std::string text = "place 5 red blocks in a wobble";
  try {
    translate(text, taskman::EnvKind::GridBuild);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(text.substr(e.begin(), e.end() - e.begin()), "in");
  }
  const std::string tech = "collect three shiny wood";
  try {
    translate(tech, taskman::EnvKind::TechLite);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(tech.substr(e.begin(), e.end() - e.begin()), "shiny");
  }
}

TEST(Translate, DestroyAndAnchors) {
  const auto plan = translate(
      "build a tower of 3 blue blocks in the middle, then place a row of 3 red blocks going east on top of it, "
      "then destroy the tower",
      taskman::EnvKind::GridBuild);
  const auto figure = taskman::final_figure(plan);
  ASSERT_EQ(figure.size(), 3u);
  for (const auto& b : figure) {
    EXPECT_EQ(b.cell.y, 3);
    EXPECT_EQ(b.color, BlockColor::Red);
  }
  EXPECT_EQ(to_string(classify_figure(figure)), "flat,air");
  // The removal happens top-down.
  const auto entries = to_coord_entries(plan.subtasks);
  ASSERT_EQ(entries.size(), 9u);
  EXPECT_EQ(entries[6].cell.y, 2);
  EXPECT_EQ(entries[8].cell.y, 0);
}

TEST(Translate, PlacementOrderKeepsSupport) {
  const auto plan = translate("a tower of 3 green blocks in the middle then a row of 4 red blocks going west on top of it",
                              taskman::EnvKind::GridBuild);
  gridbuild::VoxelGrid grid;
  for (const auto& s : plan.subtasks) {
    const auto& p = std::get<taskman::PlaceBlock>(s);
    EXPECT_TRUE(gridbuild::supported(grid, p.block.cell)) << gridbuild::to_string(p.block.cell);
    grid.set(p.block.cell, p.block.color);
  }
}

TEST(Augment, Rotate180) {
  Sample s{"place 5 red blocks in a row, one row north of center", {{{4, 0, 5}, 3}}, true};
  const Sample r = augment_rotate180(s);
  EXPECT_EQ(r.blocks[0].cell, (Cell{6, 0, 5}));
  EXPECT_EQ(r.instruction, "place 5 red blocks in a row, one row south of center");
  EXPECT_TRUE(r.aligned);
  EXPECT_EQ(augment_rotate180(r), s);
  Sample free{"make something pretty to the north", {{{1, 0, 1}, 2}}, true};
  const Sample f = augment_rotate180(free);
  EXPECT_FALSE(f.aligned);
  EXPECT_EQ(f.instruction, free.instruction);
}

TEST(Augment, RotatedTextCompilesToRotatedBlocks) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::string text = generate_gridbuild_instruction(rng);
    std::vector<CoordEntry> blocks;
    try {
      blocks = to_coord_entries(translate_gridbuild(text).subtasks);
    } catch (const ParseError&) {
      continue;
    }
    const Sample r = augment_rotate180({text, blocks, true});
    ASSERT_TRUE(r.aligned) << text;
    const auto rotated_plan = translate_gridbuild(r.instruction);
    // Same figure up to a horizontal translation.
    const auto a = taskman::final_figure(rotated_plan);
    auto b = taskman::final_figure({to_subtasks(r.blocks), {}});
    ASSERT_EQ(a.size(), b.size()) << text;
    if (a.empty()) continue;
    const auto key = [](const BlockSpec& x) { return std::tuple(x.cell.x, x.cell.z, x.cell.y); };
    auto sa = a, sb = b;
    std::sort(sa.begin(), sa.end(), [&](auto& p, auto& q) { return key(p) < key(q); });
    std::sort(sb.begin(), sb.end(), [&](auto& p, auto& q) { return key(p) < key(q); });
    const Cell d = sa[0].cell - sb[0].cell;
    for (std::size_t k = 0; k < sa.size(); ++k) {
      EXPECT_EQ(sa[k].cell, sb[k].cell + d) << text;
      EXPECT_EQ(sa[k].color, sb[k].color) << text;
    }
  }
}

TEST(Augment, Recolor) {
  Sample s{"place 5 red blocks in a row, one row north of center", expected_table1(), true};
  ColorMapping m = identity_mapping();
  m[3] = 1;
  m[1] = 3;
  const Sample r = augment_recolor(s, m);
  EXPECT_EQ(r.instruction, "place 5 blue blocks in a row, one row north of center");
  for (const auto& e : r.blocks) EXPECT_EQ(e.color_id, 1);
  EXPECT_EQ(augment_recolor(s, identity_mapping()), s);
  ColorMapping bad = identity_mapping();
  bad[1] = 3;
  EXPECT_THROW(augment_recolor(s, bad), ConfigError);
  EXPECT_EQ(parse_mapping("red=blue,blue=red"), m);
}

TEST(Dataset, LoaderIsolatesBadRows) {
  std::stringstream ss;
  ss << R"({"id":"t1","env":"gridbuild","instruction":"x","subtasks":")" << kTable1Coords
     << R"(","format":"coords"})" << '\n';
  ss << R"({"id":"t2","env":"gridbuild","instruction":"x","subtasks":"(0, 5, 5), (1, 1, 9), eastsky, red","format":"prims"})"
     << '\n';
  ss << "\n";
  ss << R"({"id":"t3","env":"techlite","instruction":"x","subtasks":["defeat_zombie","collect_iron:1"],"format":"ach"})"
     << '\n';
  ss << "not json\n";
  const LoadResult r = load_dataset(ss);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].plan.subtasks.size(), 5u);
  EXPECT_EQ(r.rows[1].line, 4u);
  ASSERT_EQ(r.errors.size(), 2u);
  EXPECT_EQ(r.errors[0].line, 2u);
  EXPECT_EQ(r.errors[1].line, 5u);
  std::stringstream empty;
  const LoadResult e = load_dataset(empty);
  EXPECT_TRUE(e.rows.empty());
  EXPECT_TRUE(e.errors.empty());
}

TEST(Generate, GridbuildRoundTripAndPrimsAgree) {
  Rng rng(5);
  int ok = 0;
  for (int i = 0; i < 300; ++i) {
    const std::string text = generate_gridbuild_instruction(rng);
    std::vector<PlanStep> steps;
    try {
      steps = translate_gridbuild_steps(text);
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("volume"), std::string::npos) << text << ": " << e.what();
      continue;
    }
    ++ok;
    DatasetRow coords{"c", taskman::EnvKind::GridBuild, text, "coords", format_coords(flatten(steps))};
    DatasetRow prims{"p", taskman::EnvKind::GridBuild, text, "prims", format_prims(steps_to_prims(steps))};
    const auto pc = decode_subtasks(coords);
    const auto pp = decode_subtasks(prims);
    EXPECT_EQ(pc.subtasks, translate_gridbuild(text).subtasks) << text;
    EXPECT_EQ(as_set(to_coord_entries(pc.subtasks)), as_set(to_coord_entries(pp.subtasks))) << text;
  }
  EXPECT_GT(ok, 250);
}

TEST(Generate, TechliteRoundTrip) {
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    const auto plan = random_achievement_plan(rng, 4);
    const std::string text = render_techlite_instruction(rng, plan);
    EXPECT_EQ(translate_techlite(text).subtasks, plan.subtasks) << text;
  }
}

TEST(LangProperty, CoordsRoundTrip) {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const auto v = props::random_block_set(rng);
    ASSERT_EQ(props::coords_round_trip(v), "");
  }
}

TEST(LangProperty, PrimsRoundTripAndExpansion) {
  Rng rng(102);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(props::prims_round_trip(rng), "");
}

TEST(LangProperty, Rotate180InvolutionKeepsClass) {
  Rng rng(103);
  std::set<std::string> classes;
  for (int i = 0; i < 1000; ++i) {
    const auto fig = props::random_figure(rng);
    ASSERT_EQ(props::rotate180_props(fig), "");
    classes.insert(to_string(classify_figure(props::cells_of(fig))));
  }
  // The generator must reach every label for the property to mean anything.
  for (std::string_view label : kFigureLabels) {
    EXPECT_TRUE(std::any_of(classes.begin(), classes.end(),
                            [&](const std::string& c) { return c.find(label) != std::string::npos; }))
        << label;
  }
}

TEST(LangProperty, RecolorKeepsGeometryAndClass) {
  Rng rng(104);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(props::recolor_props(props::random_figure(rng), rng), "");
}

TEST(LangProperty, NormalizeIdempotentAndOrderFree) {
  Rng rng(105);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(props::normalize_props(props::random_compact_blocks(rng), rng), "");
}
