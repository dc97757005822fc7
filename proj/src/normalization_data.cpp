#include "vqain/normalize.hpp"

namespace vqain {

// Byte-for-byte copy of data/normalize/answer_normalization.json. A unit
// test pins the two in sync; the shipped file is the source of truth.
const char* kAnswerNormalizationJson = R"NORMDATA({
  "version": "1.0",
  "articles": ["a", "an", "the"],
  "number_words": {
    "none": "0",
    "zero": "0",
    "one": "1",
    "two": "2",
    "three": "3",
    "four": "4",
    "five": "5",
    "six": "6",
    "seven": "7",
    "eight": "8",
    "nine": "9",
    "ten": "10"
  },
  "contractions": {
    "aint": "ain't",
    "arent": "aren't",
    "cant": "can't",
    "couldnt": "couldn't",
    "couldve": "could've",
    "didnt": "didn't",
    "doesnt": "doesn't",
    "dont": "don't",
    "hadnt": "hadn't",
    "hasnt": "hasn't",
    "havent": "haven't",
    "hes": "he's",
    "hows": "how's",
    "im": "i'm",
    "isnt": "isn't",
    "itll": "it'll",
    "ive": "i've",
    "lets": "let's",
    "mightve": "might've",
    "mustve": "must've",
    "shes": "she's",
    "shouldnt": "shouldn't",
    "shouldve": "should've",
    "thats": "that's",
    "theres": "there's",
    "theyll": "they'll",
    "theyre": "they're",
    "theyve": "they've",
    "wasnt": "wasn't",
    "werent": "weren't",
    "whats": "what's",
    "wheres": "where's",
    "whos": "who's",
    "wont": "won't",
    "wouldnt": "wouldn't",
    "wouldve": "would've",
    "youll": "you'll",
    "youre": "you're",
    "youve": "you've"
  }
}
)NORMDATA";

}  // namespace vqain
