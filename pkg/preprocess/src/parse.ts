import { DepEdge, Sentence, Span, Story, Token } from "./types";

/**
 * Deliberately small rule-based parser standing in for a full NLP
 * toolkit.  The interchange schema is the contract; swapping this file
 * for a real parser must not change anything downstream.
 */

const DETERMINERS = new Set(["the", "a", "an", "this", "these", "those"]);
const PREPOSITIONS = new Set([
  "to", "from", "through", "in", "on", "at", "with", "of", "into", "over",
]);
const PRONOUNS = new Set(["he", "she", "it", "they", "i", "you", "we"]);
const CONJUNCTIONS = new Set(["and", "but", "or"]);
const MODALS = new Set(["can", "will", "must", "may"]);
const COPULAS: Record<string, string> = {
  is: "be", are: "be", was: "be", were: "be",
};
const VERBS = new Set([
  "arrive", "escape", "depart", "run", "decide", "inspect", "scan",
  "chase", "follow", "discover", "find", "watch", "observe", "survey",
  "greet", "know", "surprise", "send", "transport", "deliver", "move",
  "act", "say", "tell", "report", "fight", "pursue", "learn", "settle",
]);
const ADJECTIVES = new Set(["upset", "happy", "angry", "calm", "quiet"]);
const SAY_VERBS = new Set(["say", "tell", "report", "know"]);

const GAZETTEER: Record<string, string> = {
  kira: "PERSON", odo: "PERSON", worf: "PERSON", boba: "PERSON",
  fett: "PERSON", jadzia: "PERSON", dax: "PERSON", julian: "PERSON",
  bashir: "PERSON", lomi: "PERSON", plo: "PERSON", nerys: "PERSON",
  starfleet: "ORG", dominion: "ORG", empire: "ORG", jabba: "ORG",
  hutt: "ORG",
  tatooine: "LOCATION", bajor: "LOCATION", coruscant: "LOCATION",
  cardassia: "LOCATION",
  defiant: "VESSEL", lakota: "VESSEL", falcon: "VESSEL", uss: "VESSEL",
  millennium: "VESSEL",
};

const PUNCT = new Set([".", ",", "!", "?", ";", ":"]);

export function splitSentences(text: string): string[] {
  return text
    .replace(/\s+/g, " ")
    .split(/(?<=[.!?])\s+/)
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
}

export function tokenize(sentence: string): string[] {
  return sentence.match(/[A-Za-z][A-Za-z'-]*|[.,!?;:]/g) ?? [];
}

function verbStem(word: string): string | null {
  if (VERBS.has(word)) return word;
  if (word.endsWith("ies") && VERBS.has(word.slice(0, -3) + "y")) {
    return word.slice(0, -3) + "y";
  }
  if (word.endsWith("es") && VERBS.has(word.slice(0, -2))) {
    return word.slice(0, -2);
  }
  if (word.endsWith("s") && VERBS.has(word.slice(0, -1))) {
    return word.slice(0, -1);
  }
  return null;
}

export function tagTokens(words: string[]): Token[] {
  return words.map((surface, i) => {
    const low = surface.toLowerCase();
    if (PUNCT.has(surface)) return [surface, surface, surface === "," ? "," : "."] as Token;
    if (DETERMINERS.has(low)) return [surface, low, "DT"] as Token;
    if (low === "that") return [surface, low, "IN"] as Token;
    if (PREPOSITIONS.has(low)) return [surface, low, "IN"] as Token;
    if (CONJUNCTIONS.has(low)) return [surface, low, "CC"] as Token;
    if (PRONOUNS.has(low)) return [surface, low, "PRP"] as Token;
    if (MODALS.has(low)) return [surface, low, "MD"] as Token;
    if (low in COPULAS) return [surface, COPULAS[low], "VBZ"] as Token;
    const stem = verbStem(low);
    if (stem !== null) {
      return [surface, stem, low === stem ? "VB" : "VBZ"] as Token;
    }
    if (ADJECTIVES.has(low)) return [surface, low, "JJ"] as Token;
    const capitalized = /^[A-Z]/.test(surface);
    if (capitalized && (i > 0 || low in GAZETTEER)) {
      return [surface, low, "NNP"] as Token;
    }
    return [surface, low, "NN"] as Token;
  });
}

export function nerSpans(tokens: Token[]): Span[] {
  const spans: Span[] = [];
  let i = 0;
  while (i < tokens.length) {
    if (tokens[i][2] !== "NNP") {
      i += 1;
      continue;
    }
    let j = i;
    while (j < tokens.length && tokens[j][2] === "NNP") j += 1;
    let category = "PERSON";
    for (let k = i; k < j; k += 1) {
      const hit = GAZETTEER[tokens[k][1]];
      if (hit) {
        category = hit;
        break;
      }
    }
    spans.push([i, j, category]);
    i = j;
  }
  return spans;
}

const isVerbTag = (tag: string) => tag.startsWith("VB");
const isNominal = (tag: string) => tag === "NN" || tag === "NNP" || tag === "PRP";

export function dependencyEdges(tokens: Token[]): { edges: DepEdge[]; constituency: Span[] } {
  const edges: DepEdge[] = [];
  const constituency: Span[] = [];
  const n = tokens.length;
  const root = tokens.findIndex((t) => isVerbTag(t[2]));
  if (root < 0) return { edges, constituency };
  edges.push([-1, root, "root"]);

  // subject: the nominal closest before the root (last token of an NNP run)
  for (let i = root - 1; i >= 0; i -= 1) {
    if (isNominal(tokens[i][2])) {
      edges.push([root, i, "nsubj"]);
      break;
    }
  }

  const thatIdx = tokens.findIndex(
    (t, i) => t[1] === "that" && i > root && SAY_VERBS.has(tokens[root][1]),
  );
  const clauseEnd = PUNCT.has(tokens[n - 1][0]) ? n - 1 : n;

  if (thatIdx > root) {
    // complement clause: that + inner subject/verb/predicate
    constituency.push([0, clauseEnd, "S"], [thatIdx, clauseEnd, "SBAR"]);
    let inner = -1;
    for (let i = thatIdx + 1; i < clauseEnd; i += 1) {
      if (isVerbTag(tokens[i][2])) {
        inner = i;
        break;
      }
    }
    if (inner > 0) {
      edges.push([root, inner, "ccomp"], [inner, thatIdx, "mark"]);
      for (let i = inner - 1; i > thatIdx; i -= 1) {
        if (isNominal(tokens[i][2])) {
          edges.push([inner, i, "nsubj"]);
          break;
        }
      }
      for (let i = inner + 1; i < clauseEnd; i += 1) {
        if (tokens[i][2] === "JJ") {
          edges.push([inner, i, "acomp"]);
          break;
        }
        if (isNominal(tokens[i][2])) {
          edges.push([inner, i, "dobj"]);
          break;
        }
      }
    }
    return { edges, constituency };
  }

  // object and prepositional phrase on the main clause
  let prep = -1;
  for (let i = root + 1; i < clauseEnd; i += 1) {
    const tag = tokens[i][2];
    if (tag === "IN") {
      prep = i;
      break;
    }
    if (tag === "CC") break;
    if (isNominal(tag)) {
      edges.push([root, i, "dobj"]);
      if (i > 0 && tokens[i - 1][2] === "DT") edges.push([i, i - 1, "det"]);
      // skip to the end of an NNP run
      while (i + 1 < clauseEnd && tokens[i + 1][2] === "NNP") i += 1;
      continue;
    }
  }
  if (prep >= 0) {
    edges.push([root, prep, "prep"]);
    for (let i = prep + 1; i < clauseEnd; i += 1) {
      if (isNominal(tokens[i][2])) {
        edges.push([prep, i, "pobj"]);
        if (tokens[i - 1][2] === "DT") edges.push([i, i - 1, "det"]);
        break;
      }
    }
  }

  // clausal conjunction: verbs on both sides of a CC
  const cc = tokens.findIndex(
    (t, i) =>
      t[2] === "CC" &&
      tokens.slice(0, i).some((x) => isVerbTag(x[2])) &&
      tokens.slice(i + 1).some((x) => isVerbTag(x[2])),
  );
  if (cc >= 0) {
    const second = tokens.findIndex((t, i) => i > cc && isVerbTag(t[2]));
    if (second >= 0) {
      edges.push([root, cc, "cc"], [root, second, "conj"]);
      for (let i = second - 1; i > cc; i -= 1) {
        if (isNominal(tokens[i][2])) {
          edges.push([second, i, "nsubj"]);
          break;
        }
      }
      constituency.push([0, cc, "S"], [cc + 1, clauseEnd, "S"]);
    }
  }
  return { edges, constituency };
}

export function parseSentence(raw: string): Sentence {
  const tokens = tagTokens(tokenize(raw));
  const { edges, constituency } = dependencyEdges(tokens);
  const sentence: Sentence = {
    tokens,
    dep_edges: edges,
    ner_spans: nerSpans(tokens),
  };
  if (constituency.length > 0) sentence.constituency = constituency;
  return sentence;
}

export function parseStory(id: string, text: string, title = "", source = ""): Story {
  const sentences = splitSentences(text).map(parseSentence);
  const story: Story = { id, sentences };
  if (title) story.title = title;
  if (source) story.source = source;
  return story;
}
