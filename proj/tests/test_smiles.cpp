// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "adaptmol/errors.hpp"
#include "adaptmol/smiles.hpp"
#include "support/molecules.hpp"

namespace adaptmol {
namespace {

std::size_t parse_error_offset(const std::string& smiles) {
  try {
    parse_smiles(smiles);
  } catch (const ParseError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "expected a parse error for " << smiles;
  return static_cast<std::size_t>(-1);
}

TEST(Parse, Ethanol) {
  const auto m = parse_smiles("CCO");
  ASSERT_EQ(m.num_atoms(), 3);
  EXPECT_EQ(m.atoms()[0].element, "C");
  EXPECT_EQ(m.atoms()[2].element, "O");
  ASSERT_EQ(m.num_bonds(), 2);
  EXPECT_EQ(m.bonds()[0].begin, 0);
  EXPECT_EQ(m.bonds()[0].end, 1);
  EXPECT_EQ(m.bonds()[1].begin, 1);
  EXPECT_EQ(m.bonds()[1].end, 2);
  EXPECT_EQ(m.bonds()[0].order, 1);
}

TEST(Parse, Cyclopropane) {
  const auto m = parse_smiles("C1CC1");
  EXPECT_EQ(m.num_atoms(), 3);
  EXPECT_EQ(m.num_bonds(), 3);
  for (const auto& b : m.bonds()) EXPECT_TRUE(b.in_ring);
  for (const auto& a : m.atoms()) EXPECT_TRUE(a.in_ring);
  ASSERT_EQ(m.rings().size(), 1u);
}

TEST(Parse, Benzene) {
  const auto m = parse_smiles("c1ccccc1");
  EXPECT_EQ(m.num_atoms(), 6);
  EXPECT_EQ(m.num_bonds(), 6);
  for (const auto& a : m.atoms()) EXPECT_TRUE(a.aromatic);
  for (const auto& b : m.bonds()) {
    EXPECT_TRUE(b.aromatic);
    EXPECT_TRUE(b.in_ring);
  }
}

TEST(Parse, BondOrdersAndBranches) {
  const auto m = parse_smiles("C(=O)C#N");
  ASSERT_EQ(m.num_bonds(), 3);
  EXPECT_EQ(m.bonds()[0].order, 2);
  EXPECT_EQ(m.bonds()[1].order, 1);
  EXPECT_EQ(m.bonds()[2].order, 3);
  EXPECT_EQ(m.degree(0), 2);
}

TEST(Parse, BracketAtoms) {
  const auto m = parse_smiles("[NH3+]CC([O-])=O");
  EXPECT_EQ(m.atoms()[0].element, "N");
  EXPECT_EQ(m.atoms()[0].explicit_hydrogens, 3);
  EXPECT_EQ(m.atoms()[0].formal_charge, 1);
  EXPECT_EQ(m.atoms()[3].formal_charge, -1);
  EXPECT_EQ(parse_smiles("[Fe+3]").atoms()[0].formal_charge, 3);
  EXPECT_EQ(parse_smiles("[O--]").atoms()[0].formal_charge, -2);
  EXPECT_EQ(parse_smiles("[nH]1cccc1").atoms()[0].aromatic, true);
}

TEST(Parse, TwoDigitRingClosures) {
  const auto m = parse_smiles("C%10CCCCC%10");
  EXPECT_EQ(m.num_bonds(), 6);
  for (const auto& b : m.bonds()) EXPECT_TRUE(b.in_ring);
}

TEST(Parse, RingClosureBondSymbol) {
  const auto m = parse_smiles("C=1CCCCC1");
  const auto b = m.bond_between(0, 5);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(m.bonds()[static_cast<std::size_t>(*b)].order, 2);
}

TEST(Parse, FusedRingsHaveSmallestRings) {
  const auto m = parse_smiles("c1ccc2ccccc2c1");
  ASSERT_EQ(m.rings().size(), 2u);
  EXPECT_EQ(m.rings()[0].atoms.size(), 6u);
  EXPECT_EQ(m.rings()[1].atoms.size(), 6u);
}

TEST(ParseErrors, Offsets) {
  EXPECT_EQ(parse_error_offset("C((C"), 2u);
  EXPECT_EQ(parse_error_offset("CC(C"), 2u);
  EXPECT_EQ(parse_error_offset("CC)C"), 2u);
  EXPECT_EQ(parse_error_offset("C1CC"), 1u);
  EXPECT_EQ(parse_error_offset("CC.CC"), 2u);
  EXPECT_EQ(parse_error_offset("CXC"), 1u);
  EXPECT_EQ(parse_error_offset("C[NH3+"), 1u);
  EXPECT_EQ(parse_error_offset("C/C=C/C"), 1u);
  EXPECT_EQ(parse_error_offset("[13C]"), 1u);
  EXPECT_EQ(parse_error_offset("[C@H](N)O"), 2u);
  EXPECT_EQ(parse_error_offset("C*"), 1u);
  EXPECT_EQ(parse_error_offset("C C"), 1u);
}

TEST(ParseErrors, StructuralProblems) {
  EXPECT_THROW(parse_smiles(""), ParseError);
  EXPECT_THROW(parse_smiles("C11"), ParseError);
  EXPECT_THROW(parse_smiles("C1C1"), ParseError);
  EXPECT_THROW(parse_smiles("C="), ParseError);
  EXPECT_THROW(parse_smiles("=C"), ParseError);
  EXPECT_THROW(parse_smiles("()"), ParseError);
  EXPECT_THROW(parse_smiles("C()C"), ParseError);
  EXPECT_THROW(parse_smiles("[CH3:1]"), ParseError);
  EXPECT_THROW(parse_smiles("C%1C"), ParseError);
  EXPECT_THROW(parse_smiles("C-1CC=1"), ParseError);
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("CCO"), (std::vector<std::string>{"C", "C", "O"}));
  EXPECT_EQ(tokenize("C(Cl)=O"), (std::vector<std::string>{"C", "(", "Cl", ")", "=", "O"}));
  EXPECT_EQ(tokenize("[NH3+]C"), (std::vector<std::string>{"[NH3+]", "C"}));
  EXPECT_EQ(tokenize("C%12CC%12Br"), (std::vector<std::string>{"C", "%12", "C", "C", "%12", "Br"}));
  EXPECT_THROW(tokenize("C(("), ParseError);
}

TEST(Features, SingleCarbon) {
  const RowMatrix x = atom_feature_matrix(parse_smiles("C"));
  ASSERT_EQ(x.rows(), 1);
  ASSERT_EQ(x.cols(), 34);
  EXPECT_EQ(x(0, element_slot("C")), 1);
  EXPECT_EQ(x(0, kElementSlots + 0), 1);
}

TEST(Features, ChainCenterDegreeTwo) {
  const RowMatrix x = atom_feature_matrix(parse_smiles("CCO"));
  EXPECT_EQ(x(1, kElementSlots + 2), 1);
  EXPECT_EQ(x.block(1, kElementSlots, 1, kDegreeSlots).sum(), 1);
}

TEST(Features, BenzeneRowsIdentical) {
  const RowMatrix x = atom_feature_matrix(parse_smiles("c1ccccc1"));
  for (int i = 1; i < 6; ++i) EXPECT_EQ(x.row(i), x.row(0));
  EXPECT_EQ(x(0, kElementSlots + kDegreeSlots), 1);      // aromatic
  EXPECT_EQ(x(0, kElementSlots + kDegreeSlots + 1), 1);  // in ring
}

TEST(Features, ChargeAndHydrogenClamp) {
  const RowMatrix x = atom_feature_matrix(parse_smiles("[Fe+3]"));
  const int charge = kElementSlots + kDegreeSlots + 2;
  EXPECT_EQ(x(0, charge + 4), 1);
  EXPECT_EQ(x(0, element_slot("Fe")), 1);
  EXPECT_EQ(element_slot("Fe"), kElementSlots - 1);
}

TEST(Corpus, CountsMatchExpected) {
  std::ifstream in(std::string(ADAPTMOL_TEST_DATA) + "/smiles_corpus.tsv");
  ASSERT_TRUE(in) << "missing corpus";
  std::string line;
  int entries = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string smiles;
    int atoms = 0, bonds = 0, ring = 0;
    ss >> smiles >> atoms >> bonds >> ring;
    const auto m = parse_smiles(smiles);
    int got_ring = 0;
    for (const auto& b : m.bonds()) got_ring += b.in_ring ? 1 : 0;
    EXPECT_EQ(m.num_atoms(), atoms) << smiles;
    EXPECT_EQ(m.num_bonds(), bonds) << smiles;
    EXPECT_EQ(got_ring, ring) << smiles;
    EXPECT_EQ(testing::invariant_violation(m), "") << smiles;
    ++entries;
  }
  EXPECT_GE(entries, 200);
}

TEST(RingFlags, MatchRemovalOracleOnGeneratedGraphs) {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto g = testing::random_molecule(rng, 1, 18, 3);
    const auto m = parse_smiles(g.smiles);
    ASSERT_EQ(m.num_atoms(), g.atoms) << g.smiles;
    std::vector<std::pair<int, int>> edges;
    for (const auto& b : m.bonds()) edges.push_back({b.begin, b.end});
    std::sort(edges.begin(), edges.end());
    EXPECT_EQ(edges, g.edges) << g.smiles;
    EXPECT_EQ(testing::invariant_violation(m), "") << g.smiles;
  }
}

TEST(Fuzz, TenThousandStringsNeverYieldMalformedGraphs) {
  std::vector<std::string> seeds;
  {
    std::ifstream in(std::string(ADAPTMOL_TEST_DATA) + "/smiles_corpus.tsv");
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') seeds.push_back(line.substr(0, line.find('\t')));
    }
  }
  ASSERT_FALSE(seeds.empty());
  Rng rng(77);
  int parsed = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string s = testing::fuzz_string(rng, seeds, i);
    try {
      const auto m = parse_smiles(s);
      ++parsed;
      ASSERT_EQ(testing::invariant_violation(m), "") << "input: " << s;
    } catch (const ParseError& e) {
      ASSERT_LE(e.offset(), s.size()) << "input: " << s;
    }
  }
  EXPECT_GT(parsed, 100);
}

}  // namespace
}  // namespace adaptmol
