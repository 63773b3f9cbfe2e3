/* Copyright 2026 The SEJE Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "seje/lexicon.hpp"

namespace seje::lexicon {

const std::vector<std::string>& ingredients() {
  static const std::vector<std::string> words = {
      "ditali pasta", "red kidney beans", "pork", "chicken breast", "ground beef", "salmon", "shrimp", "tofu",
      "rice noodles", "jasmine rice", "black beans", "chickpeas", "lentils", "spinach", "kale", "broccoli",
      "carrots", "celery", "onion", "garlic", "ginger", "scallions", "bell pepper", "jalapeno", "tomatoes",
      "potatoes", "sweet potatoes", "mushrooms", "zucchini", "eggplant", "cabbage", "corn", "peas", "green beans",
      "avocado", "lime", "lemon", "cilantro", "basil", "parsley", "thyme", "rosemary", "oregano", "cumin",
      "paprika", "chili flakes", "cinnamon", "nutmeg", "vanilla extract", "cream cheese", "cheddar cheese",
      "parmesan", "mozzarella", "feta", "butter", "heavy cream", "milk", "yogurt", "eggs", "flour", "sugar",
      "brown sugar", "honey", "maple syrup", "soy sauce", "fish sauce", "peanuts", "almonds", "walnuts",
      "coconut milk", "olive oil", "sesame oil", "vinegar", "bacon", "sausage", "lamb", "tuna", "crab meat",
      "graham crackers", "chocolate chips", "oats", "bread crumbs", "tortillas", "pizza dough", "mirin", "nori",
      "sushi rice", "bean sprouts", "pine nuts", "arborio rice"};
  return words;
}

const std::vector<std::string>& utensils() {
  static const std::vector<std::string> words = {
      "pan",    "pot",     "skillet", "bowl",  "oven",      "wok",   "saucepan", "griddle", "colander", "blender",
      "tray",   "ladle",   "spatula", "mold",  "ramekin",   "dish",  "tin",      "rack",    "board",    "knife",
      "mortar", "steamer", "kettle",  "sieve", "casserole", "platter"};
  return words;
}

const std::vector<std::string>& actions() {
  static const std::vector<std::string> words = {
      "stir",  "bake",   "chop",    "fry",    "boil",  "simmer", "saute",  "roast", "mix",   "pour",
      "knead", "slice",  "dice",    "mince",  "toss",  "fold",   "blend",  "steam", "season", "marinate",
      "broil", "sear",   "braise",  "poach",  "grate", "peel",   "spread", "layer", "garnish", "combine"};
  return words;
}

const std::vector<std::string>& dishes() {
  static const std::vector<std::string> words = {
      "pad_thai", "cheese_cake", "sushi",   "pizza",   "chili",     "curry",   "lasagna",
      "tacos",    "ramen",       "risotto", "paella",  "burrito",   "salad",   "soup",
      "stew",     "pancakes",    "brownies", "kebab",  "dumplings", "omelette"};
  return words;
}

const std::vector<std::string>& descriptors() {
  static const std::vector<std::string> words = {
      "easy", "classic", "spicy", "creamy", "homemade", "quick", "rustic", "golden", "smoky", "zesty",
      "hearty", "crispy", "tangy", "savory", "sweet", "simple", "best", "fresh", "healthy", "light"};
  return words;
}

const std::vector<std::string>& quantities() {
  static const std::vector<std::string> words = {"half", "one", "two", "three", "1", "2", "3", "4", "a"};
  return words;
}

const std::vector<std::string>& units() {
  static const std::vector<std::string> words = {"cup",   "cups",  "pound", "tablespoon", "teaspoon",
                                                 "ounces", "pinch", "clove", "bunch",      "can"};
  return words;
}

const std::vector<std::string>& preparations() {
  static const std::vector<std::string> words = {"drained", "chopped", "diced", "sliced", "minced",
                                                 "rinsed",  "softened", "melted", "grated", "crushed"};
  return words;
}

const std::vector<std::string>& function_words() {
  static const std::vector<std::string> words = {
      "the", "a",    "an",   "in",    "into", "on",   "onto", "with", "and", "or",      "to",    "for",
      "of",  "over", "until", "then", "at",   "by",   "from", "is",   "it",  "about",   "each",  "all",
      "while", "minutes", "done", "hour", "low", "medium", "high", "heat", "well", "together", "again", "more",
      "half", "one",  "two",  "three", "four", "five", "six",  "1",    "2",   "3",       "4",     "5",
      "cup", "cups", "pound", "tablespoon", "teaspoon", "ounces", "pinch", "clove", "bunch", "can", "to", "taste"};
  return words;
}

std::string pseudo_word(int n) {
  static const char* const onsets[] = {"b", "d", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
  static const char* const vowels[] = {"a", "e", "i", "o", "u"};
  std::string w;
  int x = n;
  // three syllables give 60^3 distinct words
  for (int s = 0; s < 3; ++s) {
    const int syl = x % 60;
    x /= 60;
    w += onsets[syl % 12];
    w += vowels[syl / 12];
  }
  if (x > 0) w += std::to_string(x);
  return w;
}

}  // namespace seje::lexicon
