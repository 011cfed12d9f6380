import { z } from "zod";

/** Runtime validators mirroring schemas/interchange.schema.json. */

export const TokenSchema = z.tuple([
  z.string(), // surface
  z.string(), // lemma
  z.string(), // Penn-style POS tag
]);

export const DepEdgeSchema = z.tuple([
  z.number().int().min(-1), // head (-1 = root)
  z.number().int().min(0), // child
  z.string(), // relation
]);

export const SpanSchema = z.tuple([
  z.number().int().min(0), // start, inclusive
  z.number().int().min(1), // end, exclusive
  z.string(), // label
]);

export const SentenceSchema = z
  .object({
    tokens: z.array(TokenSchema).min(1),
    dep_edges: z.array(DepEdgeSchema),
    ner_spans: z.array(SpanSchema),
    constituency: z.array(SpanSchema).optional(),
  })
  .strict()
  .superRefine((sent, ctx) => {
    const n = sent.tokens.length;
    for (const [head, child] of sent.dep_edges) {
      if (head >= n || child >= n) {
        ctx.addIssue({
          code: z.ZodIssueCode.custom,
          message: `dependency edge index out of range (${head}, ${child}) for ${n} tokens`,
        });
      }
    }
    for (const span of [...sent.ner_spans, ...(sent.constituency ?? [])]) {
      const [start, end] = span;
      if (start >= end || end > n) {
        ctx.addIssue({
          code: z.ZodIssueCode.custom,
          message: `span [${start}, ${end}) out of range for ${n} tokens`,
        });
      }
    }
  });

export const StorySchema = z
  .object({
    id: z.string().min(1),
    title: z.string().optional(),
    source: z.string().optional(),
    sentences: z.array(SentenceSchema).min(1),
  })
  .strict();

export type Token = z.infer<typeof TokenSchema>;
export type DepEdge = z.infer<typeof DepEdgeSchema>;
export type Span = z.infer<typeof SpanSchema>;
export type Sentence = z.infer<typeof SentenceSchema>;
export type Story = z.infer<typeof StorySchema>;
