#include "distort/synth.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string_view>

#include "distort/error.hpp"
#include "distort/json_io.hpp"
#include "distort/strings.hpp"

namespace distort {

using nlohmann::json;

namespace {

using Pool = std::vector<std::string_view>;

const std::map<std::string, Pool, std::less<>>& fillers() {
  static const std::map<std::string, Pool, std::less<>> kFillers = {
      {"year", {"2012", "2013", "2014", "2015", "2016", "2017"}},
      {"model", {"Corolla", "Camry", "RAV4", "Prius", "Highlander", "Tacoma"}},
      {"brand", {"Honda", "Mazda", "Ford", "Hyundai", "Nissan", "Kia"}},
      {"bmodel", {"Accord", "CX-5", "Escape", "Elantra", "Rogue", "Soul"}},
      {"n", {"3", "4", "6", "8", "10", "12", "15", "20"}},
      {"sx", {"S6", "S7", "Note 5", "A5", "J7"}},
      {"pbrand", {"LG", "Sony", "HTC", "Huawei", "Apple", "Google"}},
      {"pmodel", {"G5", "Xperia Z5", "10", "P9", "iPhone 6s", "Pixel"}},
      {"sbrand", {"Nike", "Asics", "Brooks", "Saucony", "Adidas", "Mizuno"}},
      {"smodel", {"Pegasus", "Kayano", "Ghost", "Ride", "Boost", "Wave"}},
      {"city", {"Mombasa", "Cape Town", "Lisbon", "Istanbul", "Cairo", "Athens"}},
  };
  return kFillers;
}

// Replaces every {slot} with a random filler of that slot.
std::string fill(std::string_view tmpl, Rng& rng) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      const auto slot = tmpl.substr(i + 1, close - i - 1);
      const auto& pool = fillers().at(std::string(slot));
      out += pool[rng.uniform_index(pool.size())];
      i = close + 1;
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

struct Topic {
  std::string name;
  std::string site;
  std::string extra_category;  // attached to a fifth of the documents
  Pool titles;
  Pool sentences;
  Pool intent_sentences;  // cars only: mention both "buy" and "toyota"
  Pool intent_titles;
};

const std::vector<Topic>& topics() {
  static const std::vector<Topic> kTopics = {
      {"cars",
       "motor-notes",
       "finance",
       {"{brand} {bmodel} {year} review", "Compact sedan comparison", "Owner report {n}",
        "Dealer pricing roundup", "Auto news digest {n}"},
       {"The {year} Toyota {model} scores well on reliability and resale value.",
        "Owners review the Toyota {model} after {n} months of daily driving.",
        "Should you buy a {brand} {bmodel} or wait for the {year} refresh?",
        "Tips to buy a car with bad credit from a trusted dealer.",
        "The {brand} {bmodel} gets a new hybrid engine for {year}.",
        "Winter tires improve braking on icy roads by up to {n} percent.",
        "Compare fuel economy, insurance costs and maintenance for compact sedans.",
        "A test drive of the {brand} {bmodel} shows improved handling and a quieter cabin.",
        "Honda Civic and Mazda3 remain the best-selling compacts in {year}.",
        "Financing rates for new vehicles dropped to {n} percent this spring."},
       {"Thinking of where to buy a {year} Toyota {model}? Compare dealer prices before you sign.",
        "Dealers say now is a good time to buy a Toyota {model} as {year} inventory clears.",
        "Our guide explains how to buy a used Toyota {model} without overpaying."},
       {"Buying a Toyota {model} in {year}", "Toyota {model} deals: when to buy",
        "How to buy a Toyota"}},
      {"smartphones",
       "mobile-review",
       "it",
       {"Samsung Galaxy {sx} hands-on", "{pbrand} {pmodel} battery test", "Phone releases {year}",
        "Smartphone buying guide", "Mobile news {n}"},
       {"The Samsung Galaxy {sx} brings a brighter screen and longer battery life.",
        "Phone releases in {year} include new models from Samsung, Motorola and Apple.",
        "How do smartphones work? A look at chips, antennas and touch screens.",
        "Android tablets are getting cheaper as {year} models arrive.",
        "Where to buy an unlocked Motorola phone at the lowest price.",
        "Samsung.com lists trade-in offers for older Galaxy devices.",
        "Carriers offer {n} GB data plans with unlimited calling.",
        "Battery tests show the {pbrand} {pmodel} lasts {n} hours of video.",
        "Order a Motorola phone online and get free shipping.",
        "Get a Samsung phone with a two-year plan and a free case."},
       {},
       {}},
      {"shoes",
       "footwear-daily",
       "",
       {"{sbrand} {smodel} review", "Best running shoes of {year}", "Hiking boots buyer notes",
        "Summer shoe sales", "Footwear news {n}"},
       {"Running shoes with extra cushioning reduce strain on long runs.",
        "What are the best running shoes for flat feet? Podiatrists weigh in.",
        "Shoes.com and Zappos.com both run summer shoe sales in {year}.",
        "Hiking boots should be broken in before a long trail.",
        "Buy running shoes half a size larger for marathon training.",
        "Purchase running shoes online with free returns within {n} days.",
        "The {sbrand} {smodel} is a lightweight trainer for {n}K races.",
        "Leather boots need conditioning every {n} months."},
       {},
       {}},
      {"travel",
       "wander-guide",
       "",
       {"Kenya safari planner", "Flights to Nairobi", "Packing checklist", "{city} travel notes",
        "Travel deals {n}"},
       {"Safari lodges in the Masai Mara fill up early for the {year} season.",
        "Where to go on safari in Kenya: a guide to parks and seasons.",
        "Book a flight to Nairobi and connect to the coast in under an hour.",
        "Kayak.com and Expedia.com compare fares across {n} airlines.",
        "How to pack for a long flight: layers, snacks and a neck pillow.",
        "Rent a Toyota Land Cruiser for self-drive safaris from Nairobi.",
        "Kenya safari season {year} runs from July to October.",
        "Travellers to {city} should check visa rules before departure."},
       {},
       {}},
      {"history",
       "past-times",
       "education",
       {"The Roman Empire", "Western civilization primer", "War anniversary {year}",
        "Archaeology update {n}", "History reading list"},
       {"The Roman Empire reached its greatest extent under Trajan.",
        "Why did the Roman Empire fall? Historians point to many causes.",
        "Western civilization owes much to Greek philosophy and Roman law.",
        "History.com and the BBC offer documentaries on the war anniversary in {year}.",
        "Acquire history books from university presses at a discount.",
        "The war anniversary in {year} drew crowds to memorials across Europe.",
        "Archaeologists found {n} coins near an old Roman road.",
        "Museums in {city} display artifacts from the Byzantine period."},
       {},
       {}},
  };
  return kTopics;
}

std::string doc_id(std::size_t n) {
  std::string digits = std::to_string(n);
  return "D" + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
}

// `count` distinct indices below `n`.
std::vector<std::size_t> distinct(std::size_t n, std::size_t count, Rng& rng) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(all[i], all[i + rng.uniform_index(n - i)]);
  }
  all.resize(count);
  return all;
}

std::string clip(std::string text) {
  if (text.size() <= kMaxSnippetLength) return text;
  const auto cut = text.rfind(' ', kMaxSnippetLength);
  text.resize(cut == std::string::npos ? kMaxSnippetLength : cut);
  return text;
}

}  // namespace

const std::vector<std::string>& standard_topics() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto& t : topics()) names.push_back(t.name);
    return names;
  }();
  return kNames;
}

std::vector<CorpusDoc> standard_corpus(std::uint64_t seed, std::size_t per_topic) {
  Rng rng(seed);
  std::vector<CorpusDoc> docs;
  std::size_t n = 0;
  for (const auto& topic : topics()) {
    for (std::size_t i = 0; i < per_topic; ++i) {
      CorpusDoc d;
      d.id = doc_id(++n);
      d.url = "https://www." + topic.site + ".example/" + topic.name + "/" + std::to_string(i + 1);
      d.title = fill(topic.titles[rng.uniform_index(topic.titles.size())], rng);
      std::vector<std::string> parts;
      std::size_t sentences = 3;
      if (!topic.intent_sentences.empty() && rng.uniform_unit() < 0.28) {
        parts.push_back(
            fill(topic.intent_sentences[rng.uniform_index(topic.intent_sentences.size())], rng));
        d.title = fill(topic.intent_titles[rng.uniform_index(topic.intent_titles.size())], rng);
        sentences = 2;
      }
      for (auto idx : distinct(topic.sentences.size(), sentences, rng)) {
        parts.push_back(fill(topic.sentences[idx], rng));
      }
      std::swap(parts.front(), parts[rng.uniform_index(parts.size())]);
      d.snippet = clip(join(parts, " "));
      d.categories = {topic.name};
      if (!topic.extra_category.empty() && rng.uniform_unit() < 0.2) {
        d.categories.push_back(topic.extra_category);
      }
      docs.push_back(std::move(d));
    }
  }
  return docs;
}

Q17Fixture q17_fixture() {
  Q17Fixture f;
  f.top_k = 200;
  f.relevance_phrase = "buy toyota";
  f.query.id = "Q17";
  f.query.pattern = CategoryPattern::parse("NITP");
  f.query.segments = {"shoes.com", "samsung galaxy", "buy a toyota 2014", "phone releases 2016"};
  f.query.intent_index = 2;

  static constexpr std::string_view kRelevant[] = {
      "Where to buy a Toyota Corolla at a fair price this month.",
      "Dealers explain when to buy a Toyota Camry for the best lease terms.",
      "Buy a certified Toyota RAV4 with an extended warranty.",
      "Families who buy a Toyota Highlander praise its third row.",
  };
  static constexpr std::string_view kDecoy[] = {
      "The Samsung Galaxy lineup gets a new flagship.",
      "Toyota recalls some pickup trucks over airbag sensors.",
      "Phone releases slow down ahead of the holiday season.",
      "Buy groceries in bulk to save money each week.",
      "Running shoe makers report record sales.",
      "Galaxy watch owners receive a software update.",
      "Shoes for winter need waterproof soles.",
      "The 2016 budget raised transit spending.",
  };
  static constexpr std::string_view kFiller[] = {
      "Tomatoes grow best in full sun with steady watering.",
      "Knead the dough for ten minutes until smooth and elastic.",
      "Prune roses in early spring before new growth appears.",
      "Simmer lentils with cumin and garlic for a hearty stew.",
      "Compost improves soil structure in raised garden beds.",
  };
  std::size_t n = 0;
  auto add = [&](std::string_view title, std::string_view snippet, std::string category) {
    CorpusDoc d;
    d.id = doc_id(++n);
    d.url = "https://fixture.example/" + category + "/" + std::to_string(n);
    d.title = std::string(title);
    d.snippet = std::string(snippet) + " Item " + std::to_string(n) + ".";
    d.categories = {std::move(category)};
    f.docs.push_back(std::move(d));
  };
  for (std::size_t i = 0; i < 53; ++i) add("Dealer notes", kRelevant[i % 4], "cars");
  for (std::size_t i = 0; i < 53; ++i) add("Daily digest", kDecoy[i % 8], "news");
  for (std::size_t i = 0; i < 60; ++i) add("Kitchen and garden", kFiller[i % 5], "home");
  return f;
}

std::vector<std::string> real_style_queries(std::uint64_t seed, std::size_t count) {
  static const Pool kSingles = {
      "myspace",        "google",          "ebay",         "yahoo mail",    "mapquest",
      "craigslist",     "hotmail",         "walmart",      "weather.com",   "www.bankofamerica.com",
      "american idol",  "target",          "home depot",   "msn",           "aol",
      "best buy",       "southwest airlines", "white pages", "yellow pages",  "amazon"};
  static const Pool kTemplates = {
      "cheap flights to {c}",   "weather in {c}",        "{b} dealers in {s}",
      "used {b} for sale",      "how to {t}",            "{c} hotels",
      "jobs in {c}",            "{f} recipes",           "lyrics to {g}",
      "{r} coupons",            "{s} lottery results",   "{b} parts",
      "map of {s}",             "{r} store hours",       "{f} nutrition facts",
      "apartments for rent in {c}", "{c} {s} newspaper",   "{b} {s} car show",
      "{g} music video",        "{r} application",       "{f} calories",
      "{c} zoo",                "free {t} tips"};
  static const std::map<char, Pool> kSlots = {
      {'c', {"orlando", "las vegas", "chicago", "new york", "miami", "dallas", "phoenix",
             "atlanta", "denver", "seattle", "boston", "houston"}},
      {'b', {"toyota", "ford", "chevy", "honda", "dodge", "nissan", "jeep", "harley davidson"}},
      {'s', {"ohio", "texas", "florida", "california", "georgia", "michigan", "arizona"}},
      {'t', {"fix a leaky faucet", "lose weight fast", "tie a tie", "make money online",
             "get a passport", "clean a grill", "write a resume", "train a puppy"}},
      {'f', {"chicken", "meatloaf", "banana bread", "chili", "lasagna", "pork chop"}},
      {'g', {"hey there delilah", "hips dont lie", "crazy", "unwritten", "bad day"}},
      {'r', {"old navy", "kohls", "sears", "jcpenney", "bed bath and beyond", "petsmart"}},
  };
  Rng rng(seed);
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > count * 100) throw invalid_argument("query pools too small for the count");
    std::string q;
    if (rng.uniform_unit() < 0.15) {
      q = kSingles[rng.uniform_index(kSingles.size())];
    } else {
      const auto tmpl = kTemplates[rng.uniform_index(kTemplates.size())];
      for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] == '{') {
          const auto& pool = kSlots.at(tmpl[i + 1]);
          q += pool[rng.uniform_index(pool.size())];
          i += 2;
        } else {
          q += tmpl[i];
        }
      }
    }
    if (seen.insert(q).second) out.push_back(std::move(q));
  }
  return out;
}

void write_real_style_tsv(const std::vector<std::string>& queries, std::ostream& out,
                          std::uint64_t seed) {
  Rng rng(derive_seed(seed, 1));
  out << "AnonID\tQuery\tQueryTime\tItemRank\tClickURL\n";
  int second = 0;
  for (const auto& q : queries) {
    second += 7 + static_cast<int>(rng.uniform_index(600));
    const int day = 1 + second / 86400;
    const int rem = second % 86400;
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "2006-03-%02d %02d:%02d:%02d", day, rem / 3600,
                  rem % 3600 / 60, rem % 60);
    const auto user = 100000 + rng.uniform_index(40) * 7919;
    out << user << '\t' << q << '\t' << stamp;
    if (rng.uniform_unit() < 0.5) {
      out << '\t' << 1 + rng.uniform_index(10) << "\thttp://www." << split(q, ' ').front()
          << ".com";
    } else {
      out << "\t\t";
    }
    out << '\n';
  }
}

void write_corpus_jsonl(const std::vector<CorpusDoc>& docs, std::ostream& out) {
  for (const auto& d : docs) {
    out << json{{"id", d.id},
                {"url", d.url},
                {"title", d.title},
                {"snippet", d.snippet},
                {"categories", d.categories}}
               .dump()
        << '\n';
  }
}

void write_queries_jsonl(const std::vector<ObfuscatedQuery>& queries, std::ostream& out) {
  for (const auto& q : queries) out << to_json(q).dump() << '\n';
}

std::vector<ObfuscatedQuery> distortion_fixture_queries(const Lexicon& lexicon,
                                                        std::uint64_t seed) {
  IntentQuery intent;
  intent.phrase = "buy a toyota 2014";
  intent.root_verb = "buy";
  intent.category = categorize(intent.phrase, lexicon);
  BatchOptions options;
  options.include_original = true;
  options.assemble.verb_substitution = true;
  Rng rng(seed);
  auto queries = generate_batch(intent, parse_pattern_set(kReferencePatternSet), 8, lexicon, rng,
                                options);
  Rng extra(derive_seed(seed, queries.size() + 1));
  auto q = assemble_query(intent, CategoryPattern::parse("NITPL"), lexicon, extra,
                          options.assemble);
  q.id = "Q" + std::to_string(queries.size() + 1);
  queries.push_back(std::move(q));
  return queries;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_synthetic_data(const std::filesystem::path& data_dir) {
  {
    auto out = open_out(data_dir / "corpus" / "standard.jsonl");
    write_corpus_jsonl(standard_corpus(), out);
  }
  const auto real = real_style_queries();
  {
    auto out = open_out(data_dir / "logs" / "real_style.tsv");
    write_real_style_tsv(real, out);
  }
  const auto q17 = q17_fixture();
  {
    auto out = open_out(data_dir / "fixtures" / "q17" / "corpus.jsonl");
    write_corpus_jsonl(q17.docs, out);
  }
  {
    auto out = open_out(data_dir / "fixtures" / "q17" / "query.json");
    json j = to_json(q17.query);
    j["top_k"] = q17.top_k;
    j["relevance_phrase"] = q17.relevance_phrase;
    out << j.dump(2) << '\n';
  }
  const auto fixture_dir = data_dir / "fixtures" / "distortion-vs-real-v1";
  {
    auto out = open_out(fixture_dir / "obfuscated.jsonl");
    write_queries_jsonl(distortion_fixture_queries(load_lexicon(data_dir / "lexicon.json")), out);
  }
  {
    auto out = open_out(fixture_dir / "real.tsv");
    write_real_style_tsv(real, out);
  }
}

}  // namespace distort
