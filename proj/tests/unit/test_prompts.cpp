#include <gtest/gtest.h>

#include "implang/fsg/grammar.hpp"
#include "implang/fsg/prompts.hpp"
#include "implang/morphology/lexicon.hpp"
#include "implang/morphology/prompts.hpp"
#include "implang/morphosyntax/prompts.hpp"
#include "test_util.hpp"

namespace implang {
namespace {

using testing::golden;

std::string paragraph_for(const std::vector<morphology::Paragraph>& ps, const std::string& noun) {
  for (const auto& p : ps)
    if (p.noun == noun) return p.text;
  throw std::runtime_error("no paragraph for " + noun);
}

TEST(MorphologyGolden, AllPhases) {
  EXPECT_EQ(morphology::starting_prompt(), golden("prompts/morphology_starting.txt"));
  EXPECT_EQ(morphology::testing_prompt("sep", "seven"),
            golden("prompts/morphology_testing_sep_seven.txt"));
  EXPECT_EQ(morphology::post_testing_prompts().at(0), golden("prompts/morphology_post_1.txt"));
  EXPECT_EQ(morphology::post_testing_prompts().at(1), golden("prompts/morphology_post_2.txt"));
  const auto lex = morphology::build_lexicon("3R6E");
  Rng rng(1);
  const auto ps = morphology::render_learning_paragraphs(lex, rng);
  EXPECT_EQ(morphology::learning_prompt({paragraph_for(ps, "daygin"), paragraph_for(ps, "klidam")}),
            golden("prompts/morphology_learning.txt"));
}

TEST(MorphosyntaxGolden, AllPhases) {
  namespace ms = morphosyntax;
  EXPECT_EQ(ms::starting_prompt(), golden("prompts/morphosyntax_starting.txt"));
  EXPECT_EQ(ms::testing_start_prompt(2, "alt kav erd tib"),
            golden("prompts/morphosyntax_testing_start_2.txt"));
  EXPECT_EQ(ms::testing_end_prompt(3), golden("prompts/morphosyntax_testing_end_3.txt"));
  EXPECT_EQ(ms::post_testing_prompts().at(0), golden("prompts/morphosyntax_post_1.txt"));
  EXPECT_EQ(ms::post_testing_prompts().at(1), golden("prompts/morphosyntax_post_2.txt"));
  EXPECT_EQ(ms::correction_prompt("kav alt erd tib"), golden("prompts/morphosyntax_correction.txt"));
}

TEST(SyntaxGolden, AllPhases) {
  const auto a = fsg::grammar_a();
  EXPECT_EQ(fsg::starting_prompt(a.alphabet(), 20), golden("prompts/syntax_starting_A.txt"));
  EXPECT_EQ(fsg::learning_start_prompt("X X V J"), golden("prompts/syntax_learning_start.txt"));
  EXPECT_EQ(fsg::learning_middle_prompt({false, "X X T J", false}, "X X V J"),
            golden("prompts/syntax_learning_middle.txt"));
  EXPECT_EQ(fsg::learning_end_prompt({true, "X X V J", true}, 1, true),
            golden("prompts/syntax_learning_end_1.txt"));
  EXPECT_EQ(fsg::post_testing_prompt(fsg::questions(a)), golden("prompts/syntax_post_A.txt"));
}

TEST(Golden, StartingPromptsOpenTheSameWay) {
  for (const char* f : {"prompts/morphology_starting.txt", "prompts/morphosyntax_starting.txt",
                        "prompts/syntax_starting_A.txt"}) {
    EXPECT_EQ(golden(f).rfind("Let's play a game", 0), 0u) << f;
  }
}

}  // namespace
}  // namespace implang
