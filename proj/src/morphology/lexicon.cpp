#include "implang/morphology/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "implang/core/text.hpp"

namespace implang::morphology {

const std::vector<NonceNoun>& frequency_table() {
  static const std::vector<NonceNoun> kTable{
      {"mawg", 1, 24, 16, "ka", "ka"},    {"tomber", 2, 12, 8, "ka", "ka"},
      {"glim", 3, 8, 5, "ka", "ka"},      {"zup", 4, 6, 4, "ka", "po"},
      {"spad", 5, 6, 4, "ka", "lee"},     {"daygin", 6, 4, 3, "po", "bae"},
      {"flairb", 7, 4, 3, "lee", "tay"},  {"klidam", 8, 4, 3, "bae", "muy"},
      {"lepal", 9, 4, 3, "tay", "woo"},
  };
  return kTable;
}

const std::string& MorphLexicon::marker_for(std::string_view noun) const {
  for (const auto& n : nouns) {
    if (n.surface == noun) return condition == "5R4E" ? n.marker_5r4e : n.marker_3r6e;
  }
  throw std::out_of_range("noun '" + std::string(noun) + "' not in lexicon");
}

std::vector<std::string> MorphLexicon::markers() const {
  std::vector<std::string> out;
  for (const auto& n : nouns) {
    const auto& m = marker_for(n.surface);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

int MorphLexicon::total_tokens() const {
  int sum = 0;
  for (const auto& n : nouns) sum += n.total_frequency;
  return sum;
}

int MorphLexicon::plural_tokens() const {
  int sum = 0;
  for (const auto& n : nouns) sum += n.plural_count;
  return sum;
}

MorphLexicon build_lexicon(std::string_view condition) {
  if (condition != "5R4E" && condition != "3R6E") {
    throw std::invalid_argument("unknown morphology condition '" + std::string(condition) + "'");
  }
  return MorphLexicon{std::string(condition), frequency_table()};
}

MorphLexicon build_lexicon(const ConditionId& condition) {
  if (condition.experiment() != Experiment::morphology) {
    throw std::invalid_argument("not a morphology condition: " + condition.str());
  }
  return build_lexicon(condition.label());
}

double input_regular_token_fraction(const MorphLexicon& lex) {
  int regular = 0;
  int plural = 0;
  for (const auto& n : lex.nouns) {
    plural += n.plural_count;
    if (lex.marker_for(n.surface) == kRegularMarker) regular += n.plural_count;
  }
  if (plural == 0) throw std::invalid_argument("lexicon has no plural tokens");
  return static_cast<double>(regular) / plural;
}

const std::vector<ParagraphTemplate>& paragraph_templates() {
  // "[marker]" directly follows the noun it belongs to.
  static const std::vector<ParagraphTemplate> kTemplates{
      {"mawg",
       "Peter bought six mawg[marker] from the store. He got home and opened the pack only to "
       "find five mawg[marker]. He found his backpack again making sure he didn't miss one mawg. "
       "So he went back to the store to get the missing one. The shopkeeper was really sorry "
       "that he forgot one mawg and ended up giving Peter two more mawg[marker]. Now Peter has "
       "seven mawg[marker]."},
      {"mawg",
       "Mia found seven mawg[marker] in the basement. Only one mawg was intact and the other six "
       "mawg[marker] were broken. Mia decided to use the broken parts of the mawg[marker] to make "
       "a new mawg. In the end, she succeefully restored two mawg[marker] with the six broken "
       "mawg[marker]."},
      {"mawg",
       "Alex has nine mawg[marker] and Lily has six mawg[marker]. They are trying to see if they "
       "can exchange mawg[marker] to make each other has the same number of mawg[marker]. "
       "However, if Alex gives one mawg to Lily, he still has more mawg[marker] than Lily. If "
       "Alex gives two mawg[marker] to Lily, then Lily will have one more mawg than Alex. In the "
       "end, Alex decides to give one mawg to Lily and Lily decides to buy one mawg. So each of "
       "them will have eight mawg[marker]."},
      {"tomber",
       "Yulia counts six tomber[marker] on her shelf. There are two red tomber[marker], two green "
       "tomber[marker], one yellow tomber and one pink tomber. She also wants two orange "
       "tomber[marker] to finish her collection."},
      {"tomber",
       "Tom has four tomber[marker] and Jill has seven tomber[marker]. If Jill gives Tom one "
       "tomber, Jill still has more tomber[marker] than Tom. If Jill gives Tom two "
       "tomber[marker], Tom would have one more tomber than Jill."},
      {"glim",
       "Frank bought two red glim[marker] for Penny, but she actually wanted green glim[marker]. "
       "Luckily, Nina brought a green glim[marker] for her."},
      {"glim",
       "Bob has three glim[marker]. He gave two glim[marker] to Ben and one glim to Nola. Now he "
       "only has one glim. Bob wants to buy one more glim."},
      {"zup",
       "Katie has eight zup[marker]. Kerry only had one zup. Kerry asked if Katie can give her "
       "three zup[marker]. Katie said no, but she can give her two zup[marker]. Kerry agreed, "
       "thinking that three zup[marker] is better than one zup."},
      {"spad",
       "John bought four spad[marker] for his art project. He thought he might need more "
       "spad[marker] but he only used one spad. He tried to return the three unused spad[marker] "
       "but only successfully returned one spad. He didn't know what to do with the other two "
       "spad[marker]."},
      {"daygin",
       "Joy only has one daygin. Her sister has seven daygin[marker]. Her sister gave Joy four "
       "daygin[marker] so that each of them have four daygin[marker]."},
      {"flairb",
       "There are six flairb[marker] on the table. John took two flairb[marker]. Helen took three "
       "flairb[marker]. Mike took the only one flairb left."},
      {"klidam",
       "Sally had five klidam[marker]. She gave Anne two klidam[marker] and gave Susanne two "
       "klidam[marker]. Now she only have one klidam."},
      {"lepal",
       "Mark used to have four lepal[marker]. He gave one lepal to his sister. Mark now have "
       "three lepal[marker]. His brother also asked Mark to give him two lepal[marker] but he "
       "said no."},
  };
  return kTemplates;
}

namespace {

constexpr std::string_view kSlot = "[marker]";

bool word_boundary(const std::string& s, std::size_t pos) {
  return pos >= s.size() || !std::isalpha(static_cast<unsigned char>(s[pos]));
}

Paragraph fill(const ParagraphTemplate& tpl, const std::string& marker) {
  Paragraph p{tpl.noun, {}, {}};
  const std::string& src = tpl.text;
  std::size_t pos = 0;
  while (pos < src.size()) {
    const std::size_t hit = src.find(tpl.noun, pos);
    if (hit == std::string::npos) {
      p.text.append(src, pos);
      break;
    }
    const bool left_ok = hit == 0 || !std::isalpha(static_cast<unsigned char>(src[hit - 1]));
    const std::size_t end = hit + tpl.noun.size();
    p.text.append(src, pos, end - pos);
    pos = end;
    if (!left_ok) continue;
    if (src.compare(end, kSlot.size(), kSlot) == 0) {
      p.text += marker;
      p.tokens.push_back({tpl.noun, marker});
      pos = end + kSlot.size();
    } else if (word_boundary(src, end)) {
      p.tokens.push_back({tpl.noun, std::nullopt});
    }
  }
  if (p.text.find(kSlot) != std::string::npos) {
    throw std::invalid_argument("template for '" + tpl.noun + "' has a detached marker slot");
  }
  return p;
}

}  // namespace

std::vector<Paragraph> render_learning_paragraphs(const MorphLexicon& lex, Rng& rng) {
  std::vector<Paragraph> out;
  for (const auto& tpl : paragraph_templates()) {
    const auto it = std::find_if(lex.nouns.begin(), lex.nouns.end(),
                                 [&](const NonceNoun& n) { return n.surface == tpl.noun; });
    if (it == lex.nouns.end()) {
      throw std::invalid_argument("template noun '" + tpl.noun + "' missing from lexicon");
    }
    out.push_back(fill(tpl, lex.marker_for(tpl.noun)));
  }
  shuffle_in_place(out, rng);
  return out;
}

const std::vector<std::string>& test_nouns() {
  static const std::vector<std::string> kNouns{"sep", "norg", "geed", "daffin", "fluggit", "bleggin"};
  return kNouns;
}

std::vector<TestItem> build_test_items(Rng& rng) {
  std::vector<TestItem> items;
  for (int rep = 0; rep < 2; ++rep) {
    for (const auto& noun : test_nouns()) items.push_back({noun, {}});
  }
  shuffle_in_place(items, rng);
  for (auto& item : items) {
    item.number_word = text::number_word(2 + static_cast<int>(rng.uniform_below(8)));
  }
  return items;
}

}  // namespace implang::morphology
