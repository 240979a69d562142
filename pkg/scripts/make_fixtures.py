#!/usr/bin/env python3
"""Regenerate the shipped fixtures deterministically.

Writes into fixtures/ at the repo root:
  course_corpus.jsonl     bilingual course material (8 documents, 54 passages)
  language_pairs_200.jsonl  200 aligned EN/FR question pairs
  eval_records_536.csv    labeled records matching the deployment report counts

Run from anywhere: python scripts/make_fixtures.py
"""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

# ---------------------------------------------------------------------------
# course corpus
# ---------------------------------------------------------------------------

EN_LESSON_1 = [
    "Welcome to the first lesson of the course. In this lesson you will learn how a "
    "program remembers information while it runs, and you will write your first sketch "
    "directly on your phone.",
    "A variable is a named container that stores a value. You declare a variable by "
    "writing its type, then its name, and you can give it a starting value with the "
    "equals sign.",
    "Every variable has a data type. Whole numbers use the int type, decimal numbers "
    "use the float type, true or false values use the boolean type, and single "
    "characters use the char type.",
    "Choose variable names that describe what the value means. A name like score is "
    "easier to read than a name like s, and your future self will thank you when you "
    "debug.",
    "Declaring a variable reserves space for it; initializing a variable gives it a "
    "first value. If you read a variable before initializing it, the program may use a "
    "default value or refuse to run.",
    "You can change the value stored in a variable at any time by assigning a new "
    "value to it. The old value is replaced and cannot be recovered unless you saved it "
    "somewhere else.",
    "Arithmetic operators let you combine variables: plus adds, minus subtracts, the "
    "asterisk multiplies, and the slash divides. Integer division drops the remainder, "
    "which surprises many beginners.",
    "The scope of a variable is the region of the sketch where its name is visible. A "
    "variable declared inside a block disappears when the block ends.",
    "Constants are variables whose value never changes after initialization. Marking a "
    "value as constant documents your intent and lets the computer catch accidental "
    "writes.",
    "When you print a variable with the println function, the current value appears in "
    "the console. Printing is the simplest debugging tool you have, so use it "
    "generously.",
    "A common beginner mistake is to confuse the assignment operator, a single equals "
    "sign, with the equality comparison, a double equals sign. Assignment stores a "
    "value; comparison asks a question.",
    "Practice: declare an int called score, set it to zero, add ten points, and print "
    "the result. This tiny exercise uses everything from this lesson in four lines of "
    "code.",
]

FR_LESSON_1 = [
    "Bienvenue dans la première leçon du cours. Dans cette leçon, vous apprendrez "
    "comment un programme retient des informations pendant son exécution, et vous "
    "écrirez votre premier programme directement sur votre téléphone.",
    "Une variable est un conteneur nommé qui stocke une valeur. Vous déclarez une "
    "variable en écrivant son type puis son nom, et vous pouvez lui donner une valeur "
    "initiale avec le signe égal.",
    "Chaque variable possède un type de données. Les nombres entiers utilisent le type "
    "int, les nombres décimaux le type float, les valeurs vrai ou faux le type boolean, "
    "et les caractères isolés le type char.",
    "Choisissez des noms de variables qui décrivent la signification de la valeur. Un "
    "nom comme score est plus facile à lire qu'un nom comme s, et vous vous remercierez "
    "plus tard pendant le débogage.",
    "Déclarer une variable réserve de la place pour elle ; initialiser une variable "
    "lui donne une première valeur. Si vous lisez une variable avant de l'initialiser, "
    "le programme peut utiliser une valeur par défaut ou refuser de s'exécuter.",
    "Vous pouvez changer la valeur stockée dans une variable à tout moment en lui "
    "affectant une nouvelle valeur. L'ancienne valeur est remplacée et ne peut pas être "
    "récupérée sauf si vous l'avez sauvegardée ailleurs.",
    "Les opérateurs arithmétiques permettent de combiner des variables : plus "
    "additionne, moins soustrait, l'astérisque multiplie et la barre oblique divise. La "
    "division entière ignore le reste, ce qui surprend beaucoup de débutants.",
    "La portée d'une variable est la région du programme où son nom est visible. Une "
    "variable déclarée dans un bloc disparaît quand le bloc se termine.",
    "Les constantes sont des variables dont la valeur ne change jamais après "
    "l'initialisation. Marquer une valeur comme constante documente votre intention et "
    "permet à l'ordinateur de détecter les écritures accidentelles.",
    "Quand vous affichez une variable avec la fonction println, la valeur courante "
    "apparaît dans la console. L'affichage est l'outil de débogage le plus simple, "
    "utilisez-le généreusement.",
    "Une erreur fréquente chez les débutants est de confondre l'opérateur "
    "d'affectation, un seul signe égal, avec la comparaison d'égalité, un double signe "
    "égal. L'affectation stocke une valeur ; la comparaison pose une question.",
    "Exercice : déclarez un int nommé score, mettez-le à zéro, ajoutez dix points, "
    "puis affichez le résultat. Ce petit exercice utilise tout le contenu de cette "
    "leçon en quatre lignes de code.",
]

EN_LESSON_2 = [
    "A loop repeats a block of code while a condition stays true. Loops save you from "
    "copying the same line dozens of times and make your sketch shorter and clearer.",
    "The while loop checks its condition before every pass. If the condition is false "
    "the first time, the body never runs at all.",
    "The for loop bundles initialization, condition, and update into one header line. "
    "It is the usual choice when you know in advance how many repetitions you need.",
    "An infinite loop never stops because its condition never becomes false. If your "
    "phone freezes when you run the sketch, check that the loop variable actually "
    "changes inside the body.",
    "Loops can be nested: the inner loop completes all of its passes for every single "
    "pass of the outer loop. Nested loops are how you walk over every cell of a grid.",
    "Practice: use a for loop to draw ten circles across the screen, spacing each "
    "circle by its index times forty pixels.",
]

FR_LESSON_2 = [
    "Une boucle répète un bloc de code tant qu'une condition reste vraie. Les boucles "
    "vous évitent de copier la même ligne des dizaines de fois et rendent votre "
    "programme plus court et plus clair.",
    "La boucle while vérifie sa condition avant chaque passage. Si la condition est "
    "fausse dès le départ, le corps ne s'exécute jamais.",
    "La boucle for regroupe l'initialisation, la condition et la mise à jour sur une "
    "seule ligne d'en-tête. C'est le choix habituel quand vous connaissez d'avance le "
    "nombre de répétitions.",
    "Une boucle infinie ne s'arrête jamais parce que sa condition ne devient jamais "
    "fausse. Si votre téléphone se fige quand vous lancez le programme, vérifiez que la "
    "variable de boucle change vraiment dans le corps.",
    "Les boucles peuvent être imbriquées : la boucle interne effectue tous ses "
    "passages pour chaque passage de la boucle externe. Les boucles imbriquées "
    "permettent de parcourir chaque case d'une grille.",
    "Exercice : utilisez une boucle for pour dessiner dix cercles sur l'écran, en "
    "espaçant chaque cercle de son indice multiplié par quarante pixels.",
]

EN_LOGISTICS = [
    "The course runs as a monthly cohort. All lessons, quizzes, and assignments are "
    "released on the first day, and the forum stays open for the whole month.",
    "Each section ends with a short quiz and one coding assignment. Assignments are "
    "graded automatically, and you can resubmit until the deadline.",
    "The deadline for every assignment is the last day of the cohort month at midnight "
    "in your local time zone. Late submissions are not graded.",
    "Certificates are issued to learners who complete all assignments with a passing "
    "grade. Your certificate appears in your profile within one week of the cohort "
    "closing.",
    "If you have a question, post it in the cohort forum. Facilitators and fellow "
    "learners answer quickly, and you can post anonymously if you prefer.",
]

FR_LOGISTICS = [
    "Le cours fonctionne par cohortes mensuelles. Toutes les leçons, les quiz et les "
    "devoirs sont publiés le premier jour, et le forum reste ouvert pendant tout le "
    "mois.",
    "Chaque section se termine par un petit quiz et un devoir de programmation. Les "
    "devoirs sont corrigés automatiquement et vous pouvez soumettre à nouveau jusqu'à "
    "la date limite.",
    "La date limite de chaque devoir est le dernier jour du mois de la cohorte à "
    "minuit dans votre fuseau horaire. Les soumissions en retard ne sont pas corrigées.",
    "Les certificats sont délivrés aux apprenants qui terminent tous les devoirs avec "
    "une note suffisante. Votre certificat apparaît dans votre profil dans la semaine "
    "qui suit la fin de la cohorte.",
    "Si vous avez une question, publiez-la dans le forum de la cohorte. Les "
    "facilitateurs et les autres apprenants répondent rapidement, et vous pouvez "
    "publier anonymement si vous préférez.",
]

EN_LESSON_3 = [
    "A function is a named block of code that you can call from anywhere in your "
    "sketch. Functions break a big problem into small steps that you can test one at a "
    "time.",
    "A function can take parameters, which are variables that receive the caller's "
    "values. Parameters let one function work with many different inputs.",
    "A function can return a value to its caller with the return statement. The "
    "declared return type tells the reader what kind of value to expect.",
    "Keep each function focused on one job. If you cannot describe a function in one "
    "short sentence, split it into two functions.",
]

FR_LESSON_3 = [
    "Une fonction est un bloc de code nommé que vous pouvez appeler depuis n'importe "
    "quel endroit de votre programme. Les fonctions découpent un grand problème en "
    "petites étapes que vous pouvez tester une par une.",
    "Une fonction peut prendre des paramètres, qui sont des variables recevant les "
    "valeurs de l'appelant. Les paramètres permettent à une même fonction de "
    "travailler avec des entrées différentes.",
    "Une fonction peut renvoyer une valeur à son appelant avec l'instruction return. "
    "Le type de retour déclaré indique au lecteur quel genre de valeur attendre.",
    "Gardez chaque fonction concentrée sur une seule tâche. Si vous ne pouvez pas "
    "décrire une fonction en une phrase courte, découpez-la en deux fonctions.",
]

DOCUMENTS = [
    ("en-lesson-1", "en", "Lesson 1: Variables and Data", EN_LESSON_1, ["lesson-1", "variables"]),
    ("en-lesson-2", "en", "Lesson 2: Loops", EN_LESSON_2, ["lesson-2", "loops"]),
    ("en-lesson-3", "en", "Lesson 3: Functions", EN_LESSON_3, ["lesson-3", "section-3", "functions"]),
    ("en-logistics", "en", "Course Logistics", EN_LOGISTICS, ["admin"]),
    ("fr-lesson-1", "fr", "Leçon 1 : Variables et données", FR_LESSON_1, ["lesson-1", "variables"]),
    ("fr-lesson-2", "fr", "Leçon 2 : Les boucles", FR_LESSON_2, ["lesson-2", "loops"]),
    ("fr-lesson-3", "fr", "Leçon 3 : Les fonctions", FR_LESSON_3, ["lesson-3", "fonctions"]),
    ("fr-logistics", "fr", "Informations pratiques", FR_LOGISTICS, ["admin"]),
]


def write_corpus(path: Path) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for doc_id, language, title, paragraphs, tags in DOCUMENTS:
            record = {
                "doc_id": doc_id,
                "language": language,
                "title": title,
                "body": "\n\n".join(paragraphs),
                "section_tags": tags,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# language pairs: 20 aligned templates x 10 aligned concepts = 200 pairs
# ---------------------------------------------------------------------------

CONCEPTS = [
    ("a variable", "une variable"),
    ("a loop", "une boucle"),
    ("a function", "une fonction"),
    ("an array", "un tableau"),
    ("a string", "une chaîne de caractères"),
    ("a condition", "une condition"),
    ("a class", "une classe"),
    ("a parameter", "un paramètre"),
    ("a comment", "un commentaire"),
    ("a counter", "un compteur"),
]

TEMPLATES = [
    ("How do I declare {e} in my program?", "Comment déclarer {f} dans mon programme ?"),
    ("What is {e} used for in this lesson?", "À quoi sert {f} dans cette leçon ?"),
    ("Can you explain how {e} works?", "Pouvez-vous expliquer comment fonctionne {f} ?"),
    ("I do not understand the example with {e}.", "Je ne comprends pas l'exemple avec {f}."),
    ("Why does my code fail when I use {e}?", "Pourquoi mon code échoue-t-il quand j'utilise {f} ?"),
    ("Where should I put {e} in my sketch?", "Où dois-je placer {f} dans mon programme ?"),
    ("Is there a quiz about {e} this week?", "Y a-t-il un quiz sur {f} cette semaine ?"),
    ("The lesson notes mention {e} but I am confused.", "Les notes de cours mentionnent {f} mais je suis perdu."),
    ("Could a facilitator show me an example of {e}?", "Un facilitateur pourrait-il me montrer un exemple de {f} ?"),
    ("My assignment crashes when I add {e}.", "Mon devoir plante quand j'ajoute {f}."),
    ("Do we need {e} for the next assignment?", "Avons-nous besoin de {f} pour le prochain devoir ?"),
    ("What happens if I delete {e} from the code?", "Que se passe-t-il si je supprime {f} du code ?"),
    ("How can I rename {e} without breaking the game?", "Comment puis-je renommer {f} sans casser le jeu ?"),
    ("When should I use {e} instead of a list?", "Quand dois-je utiliser {f} au lieu d'une liste ?"),
    ("Please share another exercise about {e}.", "Merci de partager un autre exercice sur {f}."),
    ("The error message appears after I change {e}.", "Le message d'erreur apparaît après que je change {f}."),
    ("Which lesson introduces {e} for the first time?", "Quelle leçon introduit {f} pour la première fois ?"),
    ("I finished the section about {e} on my phone.", "J'ai terminé la section sur {f} sur mon téléphone."),
    ("Does the final project require {e}?", "Le projet final exige-t-il {f} ?"),
    ("My friend and I disagree about {e}.", "Mon ami et moi ne sommes pas d'accord sur {f}."),
]


def write_language_pairs(path: Path) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for en_template, fr_template in TEMPLATES:
            for en_concept, fr_concept in CONCEPTS:
                pair = {"en": en_template.format(e=en_concept), "fr": fr_template.format(f=fr_concept)}
                fh.write(json.dumps(pair, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# eval records: 536 questions reproducing the deployment report counts
#   490 valid (249 curricular / 241 administrative), 46 invalid
#   376 AI-correct among valid (243 curricular + 133 administrative)
#   114 AI-missed, 44 of them recovered by the community
#   24 accepted answers: 20 AI + 4 community
#   36 questions with an upvoted answer: 25 AI-upvoted, 15 community-upvoted
#   (4 questions carry both upvote flags: 25 + 15 - 36 = 4)
# ---------------------------------------------------------------------------

N_INVALID = 46
CURRICULAR_CORRECT = 243
CURRICULAR_MISSED = 6
ADMIN_CORRECT = 133
ADMIN_MISSED = 108
RECOVERED_CURRICULAR = 2
RECOVERED_ADMIN = 42
ACCEPTED_AI = 20
ACCEPTED_COMMUNITY = 4
UPVOTED_AI_ONLY = 21
UPVOTED_COMMUNITY_ONLY = 11
UPVOTED_BOTH = 4


def build_eval_rows() -> list[dict]:
    rows: list[dict] = []

    def row(valid: bool, category: str, ai_correct: bool, community_correct: bool) -> dict:
        return {
            "question_id": "",  # assigned after the shuffle
            "valid": "1" if valid else "0",
            "category": category,
            "ai_correct": "1" if ai_correct else "0",
            "community_correct": "1" if community_correct else "0",
            "accepted_by": "none",
            "ai_answer_upvoted": "0",
            "community_answer_upvoted": "0",
        }

    for _ in range(CURRICULAR_CORRECT):
        rows.append(row(True, "curricular", True, False))
    for i in range(CURRICULAR_MISSED):
        rows.append(row(True, "curricular", False, i < RECOVERED_CURRICULAR))
    for _ in range(ADMIN_CORRECT):
        rows.append(row(True, "administrative", True, False))
    for i in range(ADMIN_MISSED):
        rows.append(row(True, "administrative", False, i < RECOVERED_ADMIN))
    for _ in range(N_INVALID):
        rows.append(row(False, "", False, False))

    # Acceptance: AI acceptances sit on AI-correct curricular rows, community
    # acceptances on community-recovered rows.
    ai_correct_rows = [r for r in rows if r["ai_correct"] == "1"]
    recovered_rows = [r for r in rows if r["community_correct"] == "1"]
    for r in ai_correct_rows[:ACCEPTED_AI]:
        r["accepted_by"] = "ai"
    for r in recovered_rows[:ACCEPTED_COMMUNITY]:
        r["accepted_by"] = "community"

    # Upvotes: AI upvotes mostly on AI-correct rows, community upvotes on
    # recovered rows, and four rows carrying both flags.
    for r in ai_correct_rows[:UPVOTED_AI_ONLY]:
        r["ai_answer_upvoted"] = "1"
    for r in recovered_rows[:UPVOTED_COMMUNITY_ONLY]:
        r["community_answer_upvoted"] = "1"
    both_pool = [r for r in ai_correct_rows if r["ai_answer_upvoted"] == "0"]
    for r in both_pool[:UPVOTED_BOTH]:
        r["ai_answer_upvoted"] = "1"
        r["community_answer_upvoted"] = "1"

    random.Random(20251231).shuffle(rows)
    for n, r in enumerate(rows, 1):
        r["question_id"] = f"q{n:03d}"
    return rows


def write_eval_records(path: Path) -> None:
    rows = build_eval_rows()
    assert len(rows) == 536, len(rows)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=[
                "question_id",
                "valid",
                "category",
                "ai_correct",
                "community_correct",
                "accepted_by",
                "ai_answer_upvoted",
                "community_answer_upvoted",
            ],
        )
        writer.writeheader()
        writer.writerows(rows)


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    write_corpus(FIXTURES / "course_corpus.jsonl")
    write_language_pairs(FIXTURES / "language_pairs_200.jsonl")
    write_eval_records(FIXTURES / "eval_records_536.csv")
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
