"""Hand-counted fixture passages.

Each passage is a list of sentences annotated by hand: ``·`` separates
syllables (dictionary syllabification) and a leading ``^`` marks a word
judged difficult (off a basic familiar-word vocabulary).  The plain text and
the manual counts are both read off the annotation, so the counts never come
from the code under test.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from policylens.text.counting import TextCounts

ANNOTATED: dict[str, list[str]] = {
    "collection": [
        "We col·lect in·for·ma·tion a·bout you when you use our ser·vic·es.",
        "This in·cludes the name and e·mail ad·dress you pro·vide when you cre·ate an ac·count.",
        "We al·so re·ceive ^tech·ni·cal da·ta from your de·vice, such as your ^brows·er type and lan·guage.",
    ],
    "cookies": [
        "Our site us·es ^cook·ies to re·mem·ber your set·tings.",
        "A ^cook·ie is a small text file that is stored on your com·put·er.",
        "You can turn off ^cook·ies in your ^brows·er, but some pag·es may not work as ex·pect·ed.",
        "We do not use ^cook·ies to track you a·cross oth·er sites.",
    ],
    "sharing": [
        "We do not sell your ^per·son·al in·for·ma·tion.",
        "We share da·ta with ^part·ners who help us run the ser·vice, like pay·ment ^pro·cess·ors and host·ing "
        "com·pa·nies.",
        "These ^part·ners may on·ly use the da·ta to do work for us.",
        "We may al·so share in·for·ma·tion when the law re·quires it.",
    ],
    "retention": [
        "We keep your da·ta for as long as your ac·count is o·pen.",
        "When you close your ac·count, we de·lete your ^pro·file with·in thir·ty days.",
        "Some rec·ords may stay in back·ups for a short time be·fore they are re·moved.",
    ],
    "rights": [
        "You have the right to see the da·ta we hold a·bout you.",
        "You may ask us to fix it if it is wrong or to de·lete it.",
        "To make a re·quest, write to us at the ad·dress be·low.",
        "We will an·swer with·in one month.",
    ],
    "children": [
        "Our ser·vice is not meant for chil·dren.",
        "We do not know·ing·ly col·lect da·ta from an·y·one un·der the age of thir·teen.",
        "If a par·ent learns that a child gave us in·for·ma·tion, they should con·tact us so we can re·move it.",
    ],
    "security": [
        "We take rea·son·a·ble steps to pro·tect your in·for·ma·tion.",
        "Da·ta is ^en·crypt·ed while it trav·els o·ver the net·work.",
        "On·ly ^staff who need the da·ta for their work can see it.",
        "No sys·tem is per·fect, so we can·not prom·ise that your da·ta will al·ways be safe.",
    ],
    "changes": [
        "We may up·date this pol·i·cy from time to time.",
        "When we make a big change, we will tell you by e·mail or with a no·tice on the site.",
        "The date at the top shows when the pol·i·cy was last changed.",
        "If you keep us·ing the site af·ter a change, you ac·cept the new ^ver·sion.",
    ],
    "advertising": [
        "We show ads that may be based on your in·ter·ests.",
        "To do this, ^ad·ver·tis·ing ^part·ners place ^cook·ies on the pag·es you vis·it.",
        "You can o·pen your ac·count set·tings to stop see·ing these ads.",
    ],
    "contact": [
        "If you have ques·tions a·bout this pol·i·cy, please get in touch.",
        "You can reach our pri·va·cy team by e·mail at an·y time.",
        "We try to re·ply to ev·ery mes·sage with·in two weeks.",
    ],
    "transfers": [
        "Your in·for·ma·tion may be moved to and stored in oth·er coun·tries.",
        "^Pri·va·cy laws in those pla·ces may be dif·fer·ent from the laws where you live.",
        "We use ^con·tracts to make sure your da·ta stays safe when it leaves your coun·try.",
    ],
    "analytics": [
        "We use ^Goo·gle ^An·a·lyt·ics to learn how peo·ple use the site.",
        "This tool col·lects in·for·ma·tion such as the pag·es you vis·it and how long you stay.",
        "The re·ports we get do not name you.",
        "You can block this by in·stall·ing a ^brows·er add-on.",
    ],
    # headings and list items are lines of their own and count as sentences
    "choices": [
        "Your Choic·es",
        "You can man·age how we use your da·ta.",
        "Mar·ket·ing E·mails",
        "Click the link at the bot·tom of an·y e·mail to stop them.",
        "Lo·ca·tion",
        "Turn off lo·ca·tion ac·cess in your de·vice set·tings.",
    ],
    "purposes": [
        "We use your in·for·ma·tion to:",
        "pro·vide and run the ser·vice",
        "an·swer your ques·tions",
        "keep our sys·tems safe",
        "send you news if you asked for it",
        "Ques·tions?",
        "Write to us.",
    ],
}

# Variants used only by the end-to-end archive fixture, not by the counting
# accuracy checks.  The vowel-group rule reads the acronym GDPR as one
# syllable instead of four.
ARCHIVE_VARIANTS: dict[str, list[str]] = {
    "retention_reworded": [
        "We keep your da·ta while your ac·count is o·pen.",
        "When you close your ac·count, we de·lete your ^pro·file with·in thir·ty days.",
        "Some rec·ords may stay in back·ups for a short time be·fore they are re·moved.",
    ],
    "gdpr": [
        "We fol·low the ^G·D·P·R when we han·dle da·ta a·bout peo·ple who live in Eu·rope.",
    ],
}

_TOKEN = re.compile(r"[\^]?[A-Za-z][A-Za-z·\-']*")


@dataclass(frozen=True)
class ManualCounts:
    counts: TextCounts
    text: str


def _syllables(token: str) -> int:
    # hyphenated compounds (add-on) count the syllables of each part
    return sum(part.count("·") + 1 for part in token.split("-"))


def _complex(token: str, sentence_start: bool) -> bool:
    """Three or more syllables, not a proper name, with a separate final
    -es/-ed/-ing syllable not counted."""
    word = token.lstrip("^")
    if not sentence_start and word[:1].isupper():
        return False
    n = _syllables(word)
    last = word.split("·")[-1].lower()
    if n >= 3 and last in ("es", "ed", "ing", "ies"):
        n -= 1
    return n >= 3


def manual(name: str) -> ManualCounts:
    sentences = ANNOTATED.get(name) or ARCHIVE_VARIANTS[name]
    words = syl = chars = poly = difficult = complex_ = 0
    for sent in sentences:
        for i, tok in enumerate(_TOKEN.findall(sent)):
            bare = tok.lstrip("^").replace("·", "")
            n = _syllables(tok.lstrip("^"))
            words += 1
            syl += n
            chars += sum(ch.isalpha() for ch in bare)
            poly += n >= 3
            difficult += tok.startswith("^")
            complex_ += _complex(tok, i == 0)
    text = ""
    for sent in sentences:
        # a line without closing punctuation (heading, list item) stands alone
        sep = " " if text and text[-1] in ".!?" and sent[:1].isupper() else "\n"
        text += (sep if text else "") + sent
    text = text.replace("·", "").replace("^", "")
    return ManualCounts(TextCounts(words, len(sentences), syl, chars, poly, difficult, complex_), text)


PASSAGES = {name: manual(name) for name in [*ANNOTATED, *ARCHIVE_VARIANTS]}
