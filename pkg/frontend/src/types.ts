/**
 * Payload shapes of the forum service's JSON API, mirrored verbatim.
 * The client renders these values as-is and computes nothing itself.
 */

export interface QuestionAuthor {
	user_id?: string;
	display_name: string;
}

export interface AnswerAuthor {
	user_id: string;
	display_name: string;
	role: "learner" | "facilitator" | "ai";
}

export interface QuestionView {
	question_id: string;
	cohort_id: string;
	body: string;
	tags: string[];
	attachments: string[];
	created_at: number;
	detected_language: "en" | "fr";
	anonymous: boolean;
	upvotes: number;
	author: QuestionAuthor;
}

export interface QuestionListItem extends QuestionView {
	answer_count: number;
	ai_pending: boolean;
}

export interface AnswerView {
	answer_id: string;
	question_id: string;
	author: AnswerAuthor;
	body: string;
	citations: string[];
	upvotes: number;
	downvotes: number;
	accepted: boolean;
	fallback: boolean;
	created_at: number;
}

export interface ThreadView {
	question: QuestionView;
	answers: AnswerView[];
	ai_pending: boolean;
}

export interface LeaderboardEntry {
	user_id: string;
	display_name: string;
	role: string;
	helpfulness_score: number;
	badge: "none" | "bronze" | "silver" | "gold";
}

export interface Me {
	user_id: string;
	display_name: string;
	role: string;
	cohort_id: string | null;
	helpfulness_score: number;
	badge: string;
}

export interface PostedQuestion {
	question_id: string;
	detected_language: string;
	ai_pending: boolean;
}

export interface VoteResult {
	answer_id: string;
	upvotes: number;
	downvotes: number;
}
