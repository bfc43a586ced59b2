// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "adaptmol/errors.hpp"
#include "adaptmol/subgraph.hpp"
#include "support/molecules.hpp"

namespace adaptmol {
namespace {

std::shared_ptr<const MolGraph> mol(const std::string& smiles) {
  return std::make_shared<const MolGraph>(parse_smiles(smiles));
}

std::vector<int> removed(const DeletionAction& a) {
  std::vector<int> out;
  for (std::size_t i = 0; i < a.removed_atoms.size(); ++i) {
    if (a.removed_atoms[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

TEST(Deletions, PropaneHasTwoTerminalDeletions) {
  const auto state = SubgraphState::full(mol("CCC"));
  const auto actions = candidate_deletions(state);
  ASSERT_EQ(actions.size(), 2u);
  EXPECT_EQ(removed(actions[0]), std::vector<int>{0});
  EXPECT_EQ(removed(actions[1]), std::vector<int>{2});
  for (const auto& a : actions) EXPECT_EQ(a.kind, DeletionAction::Kind::Bond);
}

TEST(Deletions, BenzeneHasNone) {
  EXPECT_TRUE(candidate_deletions(SubgraphState::full(mol("c1ccccc1"))).empty());
}

TEST(Deletions, MethylCyclopropane) {
  const auto state = SubgraphState::full(mol("C1CC1C"));
  const auto actions = candidate_deletions(state);
  ASSERT_EQ(actions.size(), 2u);
  EXPECT_EQ(actions[0].kind, DeletionAction::Kind::Bond);
  EXPECT_EQ(removed(actions[0]), std::vector<int>{3});
  EXPECT_EQ(actions[1].kind, DeletionAction::Kind::Ring);
  EXPECT_EQ(removed(actions[1]), (std::vector<int>{0, 1}));
  const auto after = apply_deletion(state, actions[1]);
  EXPECT_EQ(after.kept_atoms(), (std::vector<int>{2, 3}));
  EXPECT_EQ(after.bond_count(), 1);
  EXPECT_TRUE(after.is_valid());
}

TEST(Deletions, EvenSplitKeepsLowestIndexAtom) {
  const auto actions = candidate_deletions(SubgraphState::full(mol("CC")));
  ASSERT_EQ(actions.size(), 1u);
  EXPECT_EQ(removed(actions[0]), std::vector<int>{1});
  const auto even = candidate_deletions(SubgraphState::full(mol("CCCC")));
  // Middle bond splits 2|2; the side holding atom 0 stays.
  ASSERT_EQ(even.size(), 3u);
  EXPECT_EQ(removed(even[1]), (std::vector<int>{2, 3}));
}

TEST(Deletions, AromaticAndRingBondsAreProtected) {
  // Only the methyl bond qualifies in toluene besides the aromatic ring itself.
  const auto actions = candidate_deletions(SubgraphState::full(mol("Cc1ccccc1")));
  ASSERT_EQ(actions.size(), 2u);
  EXPECT_EQ(actions[0].kind, DeletionAction::Kind::Bond);
  EXPECT_EQ(actions[0].index, 0);
  EXPECT_EQ(actions[1].kind, DeletionAction::Kind::Ring);
}

TEST(Deletions, FusedRingKeepsSharedBond) {
  const auto state = SubgraphState::full(mol("C1CCC2CCCCC2C1"));
  const auto actions = candidate_deletions(state);
  ASSERT_EQ(actions.size(), 2u);
  for (const auto& a : actions) {
    const auto next = apply_deletion(state, a);
    EXPECT_TRUE(next.is_valid());
    EXPECT_EQ(next.atom_count(), 6);
    EXPECT_EQ(next.bond_count(), 6);  // the surviving ring keeps the shared bond
  }
}

TEST(Deletions, ApplyingBothTerminalsLeavesOneAtom) {
  const auto state = SubgraphState::full(mol("CCC"));
  const auto first = apply_deletion(state, candidate_deletions(state)[0]);
  EXPECT_EQ(first.atom_count(), 2);
  const auto second = apply_deletion(first, candidate_deletions(first).back());
  EXPECT_EQ(second.atom_count(), 1);
  EXPECT_EQ(second.kept_atoms(), std::vector<int>{1});
  EXPECT_TRUE(candidate_deletions(second).empty());
}

TEST(Deletions, RingsSharingAPathKeepTheSharedAtoms) {
  // Two four-membered rings share the path 0-1-2; deleting either keeps it.
  const auto state = SubgraphState::full(mol("C12CC(C1)C2"));
  for (const auto& a : candidate_deletions(state)) {
    ASSERT_EQ(a.kind, DeletionAction::Kind::Ring);
    const auto next = apply_deletion(state, a);
    EXPECT_TRUE(next.is_valid());
    EXPECT_EQ(next.atom_count(), 4);
    EXPECT_EQ(next.bond_count(), 4);
  }
}

TEST(Deletions, IllegalActionIsContractError) {
  const auto state = SubgraphState::full(mol("CCC"));
  auto action = candidate_deletions(state)[0];
  action.removed_atoms[1] = true;
  EXPECT_THROW(apply_deletion(state, action), ContractError);
  const auto benzene = SubgraphState::full(mol("c1ccccc1"));
  EXPECT_THROW(apply_deletion(benzene, action), ContractError);
}

TEST(SubgraphState, MaskValidation) {
  const auto m = mol("CCC");
  EXPECT_THROW(SubgraphState(m, {true, true}, {true, true}), DimensionError);
  EXPECT_FALSE(SubgraphState(m, {true, false, true}, {false, false}).is_valid());
  EXPECT_FALSE(SubgraphState(m, {true, true, false}, {true, true}).is_valid());
  EXPECT_FALSE(SubgraphState(m, {false, false, false}, {false, false}).is_valid());
  EXPECT_TRUE(SubgraphState(m, {true, true, false}, {true, false}).is_valid());
}

TEST(Extract, FullMaskIsIdentity) {
  const auto m = mol("CC(=O)Nc1ccc(O)cc1");
  const auto g = extract_subgraph(SubgraphState::full(m));
  ASSERT_EQ(g.num_atoms(), m->num_atoms());
  ASSERT_EQ(g.num_bonds(), m->num_bonds());
  for (int b = 0; b < g.num_bonds(); ++b) {
    EXPECT_EQ(g.bonds()[static_cast<std::size_t>(b)].begin, m->bonds()[static_cast<std::size_t>(b)].begin);
    EXPECT_EQ(g.bonds()[static_cast<std::size_t>(b)].end, m->bonds()[static_cast<std::size_t>(b)].end);
    EXPECT_EQ(g.bonds()[static_cast<std::size_t>(b)].order, m->bonds()[static_cast<std::size_t>(b)].order);
  }
  EXPECT_EQ(atom_feature_matrix(g), atom_feature_matrix(*m));
  EXPECT_EQ(g.token_texts(), m->token_texts());
}

TEST(Extract, SingleAtom) {
  const auto m = mol("CCO");
  const auto g = extract_subgraph(SubgraphState(m, {false, false, true}, {false, false}));
  EXPECT_EQ(g.num_atoms(), 1);
  EXPECT_EQ(g.num_bonds(), 0);
  EXPECT_EQ(g.atoms()[0].element, "O");
}

TEST(MaskedTokens, FullStateEqualsTokens) {
  const auto m = mol("CC(C)(Cl)c1ccccc1C%10CC%10");
  EXPECT_EQ(masked_tokens(SubgraphState::full(m)), m->token_texts());
}

TEST(MaskedTokens, DropsRemovedAtomsBranchesAndRingDigits) {
  const auto m = mol("C1CC1C(Cl)=O");
  const auto state = SubgraphState::full(m);
  const auto actions = candidate_deletions(state);
  // Remove the ring: ring digits and the two exclusive ring atoms disappear.
  const auto ring = std::find_if(actions.begin(), actions.end(),
                                 [](const DeletionAction& a) { return a.kind == DeletionAction::Kind::Ring; });
  ASSERT_NE(ring, actions.end());
  const auto next = apply_deletion(state, *ring);
  EXPECT_EQ(masked_tokens(next), (std::vector<std::string>{"C", "C", "(", "Cl", ")", "=", "O"}));
  // Remove the chlorine: its branch goes too.
  const auto cl = std::find_if(actions.begin(), actions.end(), [&](const DeletionAction& a) {
    return a.kind == DeletionAction::Kind::Bond && removed(a) == std::vector<int>{4};
  });
  ASSERT_NE(cl, actions.end());
  EXPECT_EQ(masked_tokens(apply_deletion(state, *cl)),
            (std::vector<std::string>{"C", "1", "C", "C", "1", "C", "=", "O"}));
}

TEST(Properties, RandomDeletionSequencesStayValid) {
  Rng rng(31);
  int molecules = 0;
  while (molecules < 50) {
    const auto g = testing::random_molecule(rng, 4, 16, 2);
    const auto m = mol(g.smiles);
    ++molecules;
    auto state = SubgraphState::full(m);
    while (true) {
      const auto actions = candidate_deletions(state);
      for (const auto& a : actions) {
        // Every candidate must leave a connected, non-empty subgraph.
        std::vector<bool> atoms = state.atom_mask(), bonds = state.bond_mask();
        for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = atoms[i] && !a.removed_atoms[i];
        for (std::size_t i = 0; i < bonds.size(); ++i) bonds[i] = bonds[i] && !a.removed_bonds[i];
        EXPECT_EQ(testing::component_count(*m, atoms, bonds), 1) << g.smiles;
        EXPECT_TRUE(SubgraphState(m, atoms, bonds).is_valid()) << g.smiles;
      }
      if (actions.empty()) break;
      const auto next = apply_deletion(state, actions[rng.below(actions.size())]);
      ASSERT_TRUE(next.is_valid()) << g.smiles;
      ASSERT_LT(next.atom_count(), state.atom_count()) << g.smiles;
      state = next;
    }
  }
}

TEST(Properties, ExtractCountsMatchMasks) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto g = testing::random_molecule(rng, 2, 14, 2);
    const auto m = mol(g.smiles);
    auto state = SubgraphState::full(m);
    const std::size_t steps = rng.below(4);
    for (std::size_t s = 0; s < steps; ++s) {
      const auto actions = candidate_deletions(state);
      if (actions.empty()) break;
      state = apply_deletion(state, actions[rng.below(actions.size())]);
    }
    const auto sub = extract_subgraph(state);
    EXPECT_EQ(sub.num_atoms(), state.atom_count());
    EXPECT_EQ(sub.num_bonds(), state.bond_count());
    const auto kept = state.kept_atoms();
    for (std::size_t k = 0; k < kept.size(); ++k) {
      EXPECT_EQ(sub.atoms()[k].element, m->atoms()[static_cast<std::size_t>(kept[k])].element);
    }
    std::size_t atom_tokens = 0;
    for (const auto& t : sub.tokens()) atom_tokens += t.kind == TokenKind::Atom ? 1 : 0;
    EXPECT_EQ(atom_tokens, kept.size());
    EXPECT_EQ(sub.token_texts(), masked_tokens(state));
  }
}

}  // namespace
}  // namespace adaptmol
