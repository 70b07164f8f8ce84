package shop;

public class CookBook {
}
