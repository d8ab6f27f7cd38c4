//
// Copyright 2026 The mixsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "mixsynth/prompts.hpp"

namespace mixsynth::prompts {

// Generation, verification, solution and scoring instructions.

const std::string_view kHybridInstructions = R"PROMPT(### Role: Hybrid Scenario Problem Architect

#### Profile
You are an expert in designing advanced, real-world mathematical problems. Your task is to create a hybrid real-world scenario that seamlessly blends "#Problem 1#" and "#Problem 2#", ensuring their essential mathematical elements are preserved and deeply intertwined, leading to a single, culminating challenge. The new problem must be self-contained and must not reference or mention Problem 1 or Problem 2.

#### Guidelines
Step 1: Carefully analyze the mathematical structures, variables, solution strategies, standard answers, and difficulty levels of both problems, as well as their possible real-world interpretations.

Step 2: Identify common themes, physical principles, or practical contexts that can naturally link the two problems together.

Step 3: Construct a hybrid scenario where these themes converge, introducing realistic constraints and details that bind the mathematical frameworks of both problems into a coherent, practical setting.

Step 4: Design a sophisticated, unified problem statement where solving the underlying mathematical challenges from both original problems is necessary to resolve the real-world scenario.

Step 5: When constructing the new problem, take into account the standard answers and difficulty levels of both original problems. Avoid making the new problem’s answer a simple sum, product, or direct reuse of the original answers. Ensure the new problem’s difficulty is at least as high as the more difficult of the two original problems, and ideally, it should present a new layer of challenge or synthesis.

Step 6: The new problem must be a single, standalone question with only one main objective and must not be split into multiple subproblems, parts, or steps. The answer should be unique and clearly defined. Do not require the solver to provide multiple separate answers, perform open-ended analysis, or combine results from different objectives.

Self-Check and Correction:

After constructing the hybrid problem, carefully review it by answering the following:
- Does the problem statement include all necessary information and constraints?
- Does the scenario contain any irrelevant or unnecessary details?
- Is the problem well-posed and solvable (i.e., is there at least one solution, and is the solution unique or well-defined)?
- Does the problem require only one specific answer, and is the objective clearly stated as a single maximization, minimization, or unique solution?

If any issues are found, revise and improve the problem statement to ensure it is complete, relevant, solvable, and meets the single-objective requirement.

Only output the final, corrected problem statement. Do not include the self-check process or any commentary in your final output.

Important:
- Do not mention or allude to Problem 1, Problem 2, or their answers/difficulty in the new problem.
- The final problem must have only one main objective and require only one answer.
- The new problem’s objective must be clearly defined and not require separate maximization and minimization.
- Do not split the new problem into multiple subproblems, parts, or steps. Do not require multiple distinct answers or open-ended analysis. It must be a single, unified question with a single, well-defined answer.
- After outputting the new problem statement, do not add any further explanation, commentary, or additional information. End your output immediately after the new problem statement.

#### Output Format
Please reply strictly in the following format:

#Core Elements#:
(Briefly list the main mathematical concepts, variables, or techniques from both problems that will be integrated.)

#Scenario Integration#:
(Describe how the real-world scenario is constructed to blend the mathematical elements of both problems, and how the scenario ensures the necessity of resolving both underlying mathematical challenges.)

#New Problem#:
(Present the fully integrated, standalone, and self-checked real-world problem statement with a single, clearly defined objective and a unique answer. Do not split it into multiple subproblems or parts. Do not require multiple answers or open-ended analysis. End your output here.))PROMPT";

const std::string_view kDecomposedInstructions = R"PROMPT(### Role: Advanced Mathematical Problem Decomposer

#### Profile:
You excel at decomposing advanced mathematical problems, transforming originally complex problems into easier-to-master questions, while retaining their educational value and challenge. Your task is to analyze a combination of two similar but differently difficult problems, namely "#Problem 1#" and "#Problem 2#". Based on the lower difficulty problem, simplify the higher difficulty problem by reducing its complex parts while retaining the essential concepts. The result should be a new problem that still offers learning and thought value. The new problem must be self-contained and should provide clear steps to reach the solution, without mentioning or referencing Problem 1 or Problem 2.

#### Guidelines:
Step 1: Carefully analyze the mathematical structures, variables, solution strategies, and difficulty levels of the two challenging problems provided, especially the problem with high difficulty.

Step 2: Identify opportunities to simplify the problem:
- Consider the similarities between the high and low difficulty problems and simplify complex interdependencies between variables to more direct relationships.
- Break the problem down into simple components focused on key concepts.
- Design the new problem so that one logical method leads to the solution.
- Ensure it maintains a logical sequence, clarity, and avoids any confusion. If new variables or conditions are introduced, make their determination clear and unambiguous.

Step 3: Identify common themes of the two problems. After that, consider the way to discompose the two problems and design a new problem.
When designing the new problem, consider the standard answers and difficulty levels of the two original problems. Avoid making the answer a simple subtraction, division, or direct reuse of the original answers. Ensure that the difficulty of the new problem is at least as high as the simpler of the two original problems. Ideally, it should present a clearer problem statement.

Step 4: Craft a coherent problem statement that encompasses simplified elements derived from the original complex problems, ensuring all necessary information is provided for solving the problem. Design a clear problem statement fully considering elements from both problems, ensuring all interdependencies are clear and necessary for the solution. The new problem must be a single, standalone question with only one main objective and must not be divided into multiple subproblems, parts, or steps. The answer should be unique and clearly defined.

Self-check and Revision:

After creating the new problem, review it by answering the following questions:
- Does the problem statement include all necessary information and constraints?
- Is the problem well-posed and solvable (i.e., is there at least one solution, and is the solution clear)? If any issues are found, revise and improve the problem statement to ensure it is complete, relevant, and solvable.
- Adjust parts that could lead to misunderstandings or ambiguity.
- Thoroughly review the  output to spot any unreasonable elements, ensuring it is an easier version of "#Problem 1#", but has higher difficulty than "#Problem 2#".

Important:
- Do not mention or imply specific details or answers of the original challenging problems in the new problem.
- The final problem must have only one main objective and require only one answer.
- Ensure the new problem remains unified and is not split into multiple subproblems or parts.
- After presenting the new problem statement, do not include further explanation, commentary, or additional information. End your output immediately after the new problem statement.
- For a given set of problem1 and problem2, output only one decomposed problem.
- The generated problem must not be presented in a multiple-choice format.
- Conclude the output immediately after presenting the new statement.

#### Output Format:
Please respond strictly in the following format, do not include any content from the input.:

#Core Elements#:
(Briefly list the key mathematical concepts, variables, or techniques that will be simplified and integrated into the new problem.)

#Simplification Strategy#:
(Explain how simplification is achieved by reducing complexity and focusing on key concepts. Describe how the new problem's difficulty compares to the original challenging problems.)

#New Problem#:
(Present the new, simplified problem statement, ensuring it has a single objective, is clear, and solvable. End your output here.))PROMPT";

const std::string_view kVerificationRubric = R"PROMPT(Your task is to act as an impartial judge to evaluate the statement completeness, correctness, and overall quality of a synthesized math problem according to the following rules:

1. Clarity: Is the problem statement mostly clear and understandable, even if some wording is informal or not perfectly concise?

2. Completeness: Are the main conditions, constraints, and parameters provided, so that a reasonably skilled student could attempt the problem? Minor omissions or the need for standard mathematical assumptions are acceptable.

3. Formatting: Is the problem readable and uses standard mathematical notation, even if there are minor formatting or typographical inconsistencies?

4. Relevance: Is the problem generally relevant and appropriate for the intended academic level and topic?

5. Solvability: Is the problem likely solvable by standard mathematical methods, with at least one reasonable solution? (It is acceptable if the solution is not unique, as long as the problem is meaningful.)

6. Logical Flow: Is the problem statement overall logical and consistent, and free from major irrelevant or confusing information? Minor awkwardness or redundancy is acceptable.)PROMPT";

const std::string_view kVerificationOutputFormat = R"PROMPT(#### Output Format
Judge each rule independently. Reply with exactly one line per rule, in the order above, each of the form "<Rule>: PASS" or "<Rule>: FAIL":
Clarity: PASS or FAIL
Completeness: PASS or FAIL
Formatting: PASS or FAIL
Relevance: PASS or FAIL
Solvability: PASS or FAIL
Logical Flow: PASS or FAIL
Rationale: (one sentence explaining any FAIL))PROMPT";

const std::string_view kSolutionInstructions = R"PROMPT(Solve the following math problem. Reason step by step, and put your final answer within \boxed{}.)PROMPT";

const std::string_view kSolutionReferenceNote = R"PROMPT(The related problems below are similar to the target problem and come with their verified answers. Use them as reference material only: the target problem is different, so do not copy their answers.)PROMPT";

const std::string_view kScoringInstructions = R"PROMPT(Rate the difficulty of the following math problem on a scale from 1 (easiest, routine grade-school exercise) to 10 (hardest, olympiad level). Consider the number of reasoning steps, the concepts required, and how much insight is needed. Do not solve the problem. Reply with a single line of the form "Difficulty: X/10".)PROMPT";

}  // namespace mixsynth::prompts
